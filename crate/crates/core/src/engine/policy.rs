use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::snn::CleanModelStats;
use crate::{Error, Result};

pub const TMR_COPIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MitigationKind {
    #[serde(rename = "no_mitigation")]
    NoMitigation,
    /// Bounded weights are replaced by zero.
    #[serde(rename = "bnp1")]
    BnP1,
    /// Bounded weights are replaced by the clean maximum.
    #[serde(rename = "bnp2")]
    BnP2,
    /// Bounded weights are replaced by the clean most-probable value.
    #[serde(rename = "bnp3")]
    BnP3,
    /// Three executions with independent faults and a vote on the label.
    #[serde(rename = "tmr")]
    ReExecutionTMR,
}

impl MitigationKind {
    pub const ALL: [MitigationKind; 5] = [
        MitigationKind::NoMitigation,
        MitigationKind::BnP1,
        MitigationKind::BnP2,
        MitigationKind::BnP3,
        MitigationKind::ReExecutionTMR,
    ];

    pub fn is_bnp(self) -> bool {
        matches!(self, MitigationKind::BnP1 | MitigationKind::BnP2 | MitigationKind::BnP3)
    }

    pub fn name(self) -> &'static str {
        match self {
            MitigationKind::NoMitigation => "no_mitigation",
            MitigationKind::BnP1 => "bnp1",
            MitigationKind::BnP2 => "bnp2",
            MitigationKind::BnP3 => "bnp3",
            MitigationKind::ReExecutionTMR => "tmr",
        }
    }
}

impl fmt::Display for MitigationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MitigationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MitigationKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown mitigation policy `{s}`")))
    }
}

/// Active mitigation and the contents of its hardened registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MitigationPolicy {
    pub kind: MitigationKind,
    /// Bounding threshold: weights at or above it are replaced.
    pub wgh_th: u8,
    /// Replacement value for bounded weights.
    pub wgh_def: u8,
}

impl MitigationPolicy {
    pub fn no_mitigation() -> Self {
        Self {
            kind: MitigationKind::NoMitigation,
            wgh_th: u8::MAX,
            wgh_def: 0,
        }
    }

    /// Policy for `kind` with the threshold set to the clean maximum weight
    /// and the replacement value chosen by the variant.
    pub fn from_stats(kind: MitigationKind, stats: &CleanModelStats) -> Self {
        let wgh_def = match kind {
            MitigationKind::BnP1 | MitigationKind::NoMitigation | MitigationKind::ReExecutionTMR => 0,
            MitigationKind::BnP2 => stats.wgh_max,
            MitigationKind::BnP3 => stats.wgh_hp,
        };
        Self {
            kind,
            wgh_th: stats.wgh_max,
            wgh_def,
        }
    }

    /// Explicit registers; the replacement value must itself be in the safe range.
    pub fn custom(kind: MitigationKind, wgh_th: u8, wgh_def: u8) -> Result<Self> {
        if kind.is_bnp() && wgh_def > wgh_th {
            return Err(Error::invalid(format!(
                "replacement weight {wgh_def} exceeds bounding threshold {wgh_th}"
            )));
        }
        Ok(Self { kind, wgh_th, wgh_def })
    }

    pub fn bounds_weights(&self) -> bool {
        self.kind.is_bnp()
    }

    pub fn protects_neurons(&self) -> bool {
        self.kind.is_bnp()
    }
}

/// Weight bounding: `wgh_def` when `wgh >= wgh_th`, otherwise `wgh`.
/// Policies without bounding pass the weight through.
#[inline]
pub fn bound_weight(wgh: u8, policy: &MitigationPolicy) -> u8 {
    if policy.bounds_weights() && wgh >= policy.wgh_th {
        policy.wgh_def
    } else {
        wgh
    }
}
