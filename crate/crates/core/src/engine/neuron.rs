//! Faulty neuron operations and the reset-fault protection circuit.

use crate::fault::NeuronFaultKind;
use crate::snn::{LifNeuronState, OpMask, StepOutcome};

/// Which neuron operations still work under `fault`.
///
/// - `VmemIncrease`: incoming weights are never integrated.
/// - `VmemLeak`: the potential does not leak.
/// - `VmemReset`: a crossing emits a spike but neither resets the potential
///   nor starts the refractory period, so the neuron keeps firing while it
///   stays above threshold.
/// - `SpikeGeneration`: the spike output is stuck at zero.
pub fn apply_neuron_fault_semantics(fault: Option<NeuronFaultKind>) -> OpMask {
    let mut ops = OpMask::HEALTHY;
    match fault {
        None => {}
        Some(NeuronFaultKind::VmemIncrease) => ops.increase = false,
        Some(NeuronFaultKind::VmemLeak) => ops.leak = false,
        Some(NeuronFaultKind::VmemReset) => ops.reset = false,
        Some(NeuronFaultKind::SpikeGeneration) => ops.spike = false,
    }
    ops
}

/// Monitors the threshold comparator after a neuron update.
///
/// A healthy neuron resets on every crossing, so `detect_cycles` crossings
/// with no reset in between mean the reset operation is broken, and the
/// neuron's spike generation is disabled for the rest of the presentation.
/// Returns true when the neuron was disabled by this call.
pub fn detect_and_protect(state: &mut LifNeuronState, outcome: StepOutcome, detect_cycles: u32) -> bool {
    if outcome.crossed && !outcome.reset {
        state.compare_streak += 1;
    } else if outcome.reset {
        state.compare_streak = 0;
    }
    if !state.spike_disabled && state.compare_streak >= detect_cycles {
        state.spike_disabled = true;
        return true;
    }
    false
}
