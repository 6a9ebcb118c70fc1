//! Column-wise weight accumulation.
//!
//! Each synapse adds its (possibly bounded) weight to the partial sum coming
//! from the synapse above it, so a neuron receives one integer per timestep:
//! the sum of its weights over the input lines that spiked. Sums are kept as
//! integer codes and scaled to potential units by the caller.

use super::policy::{bound_weight, MitigationPolicy};
use crate::{Error, Result};

/// Integer sum of the weights of one column over the active inputs.
pub fn column_accumulate_raw(spikes: &[bool], column: &[u8], policy: &MitigationPolicy) -> Result<u32> {
    if spikes.len() != column.len() {
        return Err(Error::invalid(format!(
            "{} input spikes for a column of {} synapses",
            spikes.len(),
            column.len()
        )));
    }
    Ok(spikes
        .iter()
        .zip(column)
        .filter(|(&s, _)| s)
        .map(|(_, &w)| u32::from(bound_weight(w, policy)))
        .sum())
}

/// Accumulated potential of one column: the integer sum times the weight scale.
pub fn column_accumulate(spikes: &[bool], column: &[u8], policy: &MitigationPolicy, scale: f64) -> Result<f64> {
    column_accumulate_raw(spikes, column, policy).map(|sum| f64::from(sum) * scale)
}

/// All columns at once for a row-major `rows × cols` matrix of weights that
/// already went through bounding: adds the weight row of every active input
/// line into `acc`.
///
/// Under a bounding policy every weight read here must be below `wgh_th`
/// or equal to `wgh_def`; debug builds check this per access.
pub fn accumulate_active(active: &[u32], weights: &[u8], cols: usize, policy: &MitigationPolicy, acc: &mut [u32]) {
    debug_assert_eq!(acc.len(), cols);
    acc.fill(0);
    for &row in active {
        let row = row as usize;
        let line = &weights[row * cols..(row + 1) * cols];
        if cfg!(debug_assertions) && policy.bounds_weights() {
            for &w in line {
                assert!(
                    w < policy.wgh_th || w == policy.wgh_def,
                    "unbounded weight {w} reached the accumulator under {:?}",
                    policy.kind
                );
            }
        }
        for (a, &w) in acc.iter_mut().zip(line) {
            *a += u32::from(w);
        }
    }
}
