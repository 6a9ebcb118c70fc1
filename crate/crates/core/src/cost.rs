//! Parametric latency / energy / area model of the compute engine.
//!
//! Absolute constants are placeholders for a synthesized design; the
//! relative overheads of each mitigation are the meaningful part and are
//! exposed as factors. Networks larger than the crossbar are executed as
//! `ceil(inputs / rows) * ceil(neurons / cols)` sequential tiles.

use serde::{Deserialize, Serialize};

use crate::engine::MitigationKind;
use crate::fault::Dims;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    /// Clock cycles to process one timestep of one crossbar tile.
    pub base_cycles_per_timestep: u64,
    /// Seconds per clock cycle.
    pub cycle_time: f64,
    /// Watts drawn by the unmodified engine.
    pub base_power: f64,
    pub bnp_latency_factor: f64,
    /// Energy of a bounded-and-protected inference relative to an unmitigated one.
    pub bnp_energy_factor: f64,
    pub tmr_factor: f64,
    pub area_base: f64,
    pub area_bnp1: f64,
    pub area_bnp23: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            base_cycles_per_timestep: 256,
            cycle_time: 5e-9,
            base_power: 10e-3,
            bnp_latency_factor: 1.06,
            bnp_energy_factor: 1.6,
            tmr_factor: 3.0,
            area_base: 1.0,
            area_bnp1: 1.14,
            area_bnp23: 1.18,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        if self.base_cycles_per_timestep == 0 || !(self.cycle_time > 0.0) || !(self.base_power > 0.0) {
            return Err(Error::Config(
                "cost model needs positive cycles per timestep, cycle time and power".into(),
            ));
        }
        let factors = [
            ("bnp_latency_factor", self.bnp_latency_factor),
            ("bnp_energy_factor", self.bnp_energy_factor),
            ("area_bnp1", self.area_bnp1 / self.area_base),
            ("area_bnp23", self.area_bnp23 / self.area_base),
        ];
        if let Some((name, _)) = factors.iter().find(|(_, f)| !(*f >= 1.0)) {
            return Err(Error::Config(format!("cost factor {name} must be at least 1")));
        }
        if self.tmr_factor != 3.0 {
            return Err(Error::Config("tmr_factor is fixed at 3".into()));
        }
        Ok(())
    }

    pub fn area(&self, kind: MitigationKind) -> f64 {
        match kind {
            MitigationKind::NoMitigation | MitigationKind::ReExecutionTMR => self.area_base,
            MitigationKind::BnP1 => self.area_bnp1,
            MitigationKind::BnP2 | MitigationKind::BnP3 => self.area_bnp23,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub latency: f64,
    pub energy: f64,
    pub area: f64,
    /// Clock cycles summed over all executions of the inference.
    pub cycles: u64,
    pub tiles: u64,
}

impl CostReport {
    pub fn average_power(&self) -> f64 {
        self.energy / self.latency
    }
}

pub fn tile_count(network: Dims, crossbar: Dims) -> Result<u64> {
    if network.rows == 0 || network.cols == 0 || crossbar.rows == 0 || crossbar.cols == 0 {
        return Err(Error::invalid("network and crossbar dimensions must be positive"));
    }
    Ok((network.rows.div_ceil(crossbar.rows) * network.cols.div_ceil(crossbar.cols)) as u64)
}

/// Cost of one inference of `duration` timesteps.
pub fn estimate_cost(
    kind: MitigationKind,
    network: Dims,
    crossbar: Dims,
    duration: usize,
    params: &CostParams,
) -> Result<CostReport> {
    if duration == 0 {
        return Err(Error::invalid("inference duration must be positive"));
    }
    let tiles = tile_count(network, crossbar)?;
    let single_cycles = duration as u64 * tiles * params.base_cycles_per_timestep;
    let base_latency = single_cycles as f64 * params.cycle_time;
    let base_energy = params.base_power * base_latency;
    let (latency, energy, cycles) = match kind {
        MitigationKind::NoMitigation => (base_latency, base_energy, single_cycles),
        MitigationKind::BnP1 | MitigationKind::BnP2 | MitigationKind::BnP3 => (
            base_latency * params.bnp_latency_factor,
            base_energy * params.bnp_energy_factor,
            single_cycles,
        ),
        MitigationKind::ReExecutionTMR => (
            base_latency * params.tmr_factor,
            base_energy * params.tmr_factor,
            single_cycles * params.tmr_factor as u64,
        ),
    };
    Ok(CostReport {
        latency,
        energy,
        area: params.area(kind),
        cycles,
        tiles,
    })
}
