//! Transient-fault model of the compute engine.
//!
//! Potential fault locations are every bit of every 8-bit weight register
//! and the operation unit of every neuron. For one execution each location
//! faults independently with the configured rate. A faulty register bit is
//! flipped and stays flipped until the weights are reloaded; a faulty neuron
//! gets one of the four operation faults, chosen uniformly, which lasts
//! until the next input presentation reloads its parameters.

mod format;

pub use format::{deserialize_fault_map, serialize_fault_map, FAULT_MAP_FORMAT, FAULT_MAP_VERSION};

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::snn::QuantizedWeightMatrix;
use crate::{Error, Result};

/// Bits per weight register.
pub const WEIGHT_BITS: u8 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeuronFaultKind {
    /// The potential cannot be increased by incoming weights.
    VmemIncrease,
    /// The potential cannot leak.
    VmemLeak,
    /// The potential is not reset after a threshold crossing.
    VmemReset,
    /// No spike is emitted.
    SpikeGeneration,
}

impl NeuronFaultKind {
    pub const ALL: [NeuronFaultKind; 4] = [
        NeuronFaultKind::VmemIncrease,
        NeuronFaultKind::VmemLeak,
        NeuronFaultKind::VmemReset,
        NeuronFaultKind::SpikeGeneration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NeuronFaultKind::VmemIncrease => "vmem_increase",
            NeuronFaultKind::VmemLeak => "vmem_leak",
            NeuronFaultKind::VmemReset => "vmem_reset",
            NeuronFaultKind::SpikeGeneration => "spike_generation",
        }
    }
}

/// A single potential fault location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaultLocation {
    SynapseBit { row: usize, col: usize, bit: u8 },
    NeuronOp { col: usize },
}

/// Crossbar extent a fault map is drawn over: input lines × neurons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub rows: usize,
    pub cols: usize,
}

impl Dims {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn synapse_bit_locations(&self) -> usize {
        self.rows * self.cols * usize::from(WEIGHT_BITS)
    }

    pub fn contains(&self, loc: FaultLocation) -> bool {
        match loc {
            FaultLocation::SynapseBit { row, col, bit } => {
                row < self.rows && col < self.cols && bit < WEIGHT_BITS
            }
            FaultLocation::NeuronOp { col } => col < self.cols,
        }
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl std::str::FromStr for Dims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::invalid(format!("dimensions `{s}` are not of the form ROWSxCOLS")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad dimension `{v}` in `{s}`")))
        };
        Ok(Dims::new(parse(r)?, parse(c)?))
    }
}

/// A synapse register bit flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BitFlip {
    pub row: u32,
    pub col: u32,
    pub bit: u8,
}

/// The faults sampled for one execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultMap {
    pub dims: Dims,
    pub fault_rate: f64,
    pub seed: u64,
    /// ChaCha stream the map was drawn from (nonzero for redundant copies).
    pub stream: u64,
    /// Sorted by (row, col, bit); no duplicates.
    pub synapse_flips: Vec<BitFlip>,
    pub neuron_faults: BTreeMap<usize, NeuronFaultKind>,
}

impl FaultMap {
    /// A map with no faults.
    pub fn empty(dims: Dims) -> Self {
        Self {
            dims,
            fault_rate: 0.0,
            seed: 0,
            stream: 0,
            synapse_flips: Vec::new(),
            neuron_faults: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.synapse_flips.is_empty() && self.neuron_faults.is_empty()
    }

    pub fn neuron_fault(&self, col: usize) -> Option<NeuronFaultKind> {
        self.neuron_faults.get(&col).copied()
    }

    pub fn locations(&self) -> impl Iterator<Item = FaultLocation> + '_ {
        self.synapse_flips
            .iter()
            .map(|f| FaultLocation::SynapseBit {
                row: f.row as usize,
                col: f.col as usize,
                bit: f.bit,
            })
            .chain(
                self.neuron_faults
                    .keys()
                    .map(|&col| FaultLocation::NeuronOp { col }),
            )
    }

    /// Checks sortedness, uniqueness and bounds of every location.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fault_rate) {
            return Err(Error::invalid(format!("fault rate {} outside [0, 1]", self.fault_rate)));
        }
        if self.synapse_flips.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("synapse flips are not strictly ordered (duplicate location?)"));
        }
        if let Some(bad) = self.locations().find(|&l| !self.dims.contains(l)) {
            return Err(Error::invalid(format!(
                "fault location {bad:?} outside the {} crossbar",
                self.dims
            )));
        }
        Ok(())
    }

    /// Fraction of neurons carrying a fault of `kind`.
    pub fn count_kind(&self, kind: NeuronFaultKind) -> usize {
        self.neuron_faults.values().filter(|&&k| k == kind).count()
    }
}

/// Samples a fault map from stream 0 of `seed`.
pub fn generate_fault_map(dims: Dims, fault_rate: f64, seed: u64) -> Result<FaultMap> {
    generate_fault_map_stream(dims, fault_rate, seed, 0)
}

/// Samples a fault map from an explicit ChaCha stream of `seed`.
///
/// Synapse bits are visited row by row, neuron by neuron, bit 0 to 7, then
/// neuron operation units in index order; each location draws one uniform
/// number and faults when it falls below `fault_rate`. Every neuron also
/// draws a fault kind, used only when it faults, so maps drawn from one seed
/// at increasing rates are nested.
pub fn generate_fault_map_stream(dims: Dims, fault_rate: f64, seed: u64, stream: u64) -> Result<FaultMap> {
    if !(0.0..=1.0).contains(&fault_rate) {
        return Err(Error::invalid(format!("fault rate {fault_rate} outside [0, 1]")));
    }
    if dims.rows == 0 || dims.cols == 0 {
        return Err(Error::invalid("fault map dimensions must be positive"));
    }
    let mut map = FaultMap {
        dims,
        fault_rate,
        seed,
        stream,
        ..FaultMap::empty(dims)
    };
    if fault_rate == 0.0 {
        return Ok(map);
    }
    let mut rng = rng::substream(seed, stream);
    for row in 0..dims.rows as u32 {
        for col in 0..dims.cols as u32 {
            for bit in 0..WEIGHT_BITS {
                if rng.random::<f64>() < fault_rate {
                    map.synapse_flips.push(BitFlip { row, col, bit });
                }
            }
        }
    }
    for col in 0..dims.cols {
        let u = rng.random::<f64>();
        let kind = NeuronFaultKind::ALL[rng.random_range(0..NeuronFaultKind::ALL.len())];
        if u < fault_rate {
            map.neuron_faults.insert(col, kind);
        }
    }
    Ok(map)
}

/// Copy of `weights` with every listed register bit inverted.
pub fn apply_bit_flips(weights: &QuantizedWeightMatrix, map: &FaultMap) -> Result<QuantizedWeightMatrix> {
    let (rows, cols) = (weights.rows(), weights.cols());
    let mut out = weights.clone();
    let codes = out.codes_mut();
    for flip in &map.synapse_flips {
        let (r, c) = (flip.row as usize, flip.col as usize);
        if r >= rows || c >= cols || flip.bit >= WEIGHT_BITS {
            return Err(Error::invalid(format!(
                "bit flip at ({r}, {c}, bit {}) outside the {rows}x{cols} weight matrix",
                flip.bit
            )));
        }
        codes[r * cols + c] ^= 1 << flip.bit;
    }
    Ok(out)
}
