//! Discrete-time leaky integrate-and-fire neuron.
//!
//! The leak is a fixed subtraction per timestep with the potential floored at
//! `v_rest`, which is what a digital neuron datapath does when "otherwise the
//! potential is decreased". An adaptive threshold offset `theta` provides
//! homeostasis during training and is frozen at inference.

use serde::{Deserialize, Serialize};

use crate::fault::NeuronFaultKind;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifParams {
    pub v_threshold: f64,
    pub v_reset: f64,
    pub v_rest: f64,
    /// Potential removed every non-refractory timestep.
    pub leak_amount: f64,
    /// Timesteps without integration after a spike.
    pub t_refractory: u32,
    /// Potential removed from every other neuron per spike in the previous timestep.
    pub inhibition_strength: f64,
    /// Threshold increment per emitted spike.
    pub theta_plus: f64,
    /// Per-timestep multiplicative retention of `theta` (1.0 keeps it constant).
    pub theta_decay: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        Self {
            v_threshold: 5.0,
            v_reset: 0.0,
            v_rest: 0.0,
            leak_amount: 0.05,
            t_refractory: 5,
            inhibition_strength: 4.0,
            theta_plus: 0.05,
            theta_decay: 1.0,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.v_threshold,
            self.v_reset,
            self.v_rest,
            self.leak_amount,
            self.inhibition_strength,
            self.theta_plus,
            self.theta_decay,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("LIF parameters must be finite"));
        }
        if !(self.v_reset <= self.v_rest && self.v_rest < self.v_threshold) {
            return Err(Error::invalid(format!(
                "LIF parameters need v_reset <= v_rest < v_threshold, got {} / {} / {}",
                self.v_reset, self.v_rest, self.v_threshold
            )));
        }
        if self.leak_amount < 0.0 || self.inhibition_strength < 0.0 || self.theta_plus < 0.0 {
            return Err(Error::invalid(
                "leak_amount, inhibition_strength and theta_plus must be non-negative",
            ));
        }
        if !(0.0..=1.0).contains(&self.theta_decay) {
            return Err(Error::invalid("theta_decay must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Copy with threshold adaptation switched off, used for inference.
    pub fn frozen(&self) -> Self {
        Self {
            theta_plus: 0.0,
            theta_decay: 1.0,
            ..*self
        }
    }
}

/// Which of the four neuron operations are functional in the current execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpMask {
    pub increase: bool,
    pub leak: bool,
    pub reset: bool,
    pub spike: bool,
}

impl OpMask {
    pub const HEALTHY: OpMask = OpMask {
        increase: true,
        leak: true,
        reset: true,
        spike: true,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifNeuronState {
    pub v_mem: f64,
    pub theta: f64,
    pub refractory_remaining: u32,
    pub fault: Option<NeuronFaultKind>,
    pub spike_disabled: bool,
    /// Consecutive timesteps the threshold comparison stayed true without a reset.
    pub compare_streak: u32,
}

/// Observable result of one neuron update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepOutcome {
    /// Output of the `v_mem >= threshold` comparator this timestep.
    pub crossed: bool,
    /// The potential was returned to `v_reset`.
    pub reset: bool,
    pub spiked: bool,
}

impl LifNeuronState {
    pub fn at_rest(params: &LifParams) -> Self {
        Self {
            v_mem: params.v_rest,
            theta: 0.0,
            refractory_remaining: 0,
            fault: None,
            spike_disabled: false,
            compare_streak: 0,
        }
    }

    /// Clears everything an input presentation leaves behind: potential,
    /// refractory counter, fault assignment and protection state. `theta` is
    /// a learned parameter and survives.
    pub fn begin_presentation(&mut self, params: &LifParams, fault: Option<NeuronFaultKind>) {
        self.v_mem = params.v_rest;
        self.refractory_remaining = 0;
        self.fault = fault;
        self.spike_disabled = false;
        self.compare_streak = 0;
    }

    pub fn threshold(&self, params: &LifParams) -> f64 {
        params.v_threshold + self.theta
    }

    /// Advances the neuron by one timestep.
    ///
    /// `input_current` is the accumulated synaptic input of this timestep and
    /// `inhibition` the lateral inhibition received from spikes of the
    /// previous timestep. The fault assigned to this neuron, if any, is
    /// applied through [`crate::engine::apply_neuron_fault_semantics`].
    pub fn step(&mut self, params: &LifParams, input_current: f64, inhibition: f64) -> StepOutcome {
        debug_assert!(input_current >= 0.0);
        let ops = crate::engine::apply_neuron_fault_semantics(self.fault);
        self.theta *= params.theta_decay;

        if self.refractory_remaining > 0 {
            self.refractory_remaining -= 1;
            return StepOutcome::default();
        }

        let gain = if ops.increase { input_current } else { 0.0 };
        let leak = if ops.leak { params.leak_amount } else { 0.0 };
        self.v_mem = (self.v_mem + gain - leak - inhibition).max(params.v_rest);

        let crossed = self.v_mem >= self.threshold(params);
        if !crossed {
            return StepOutcome::default();
        }
        let spiked = ops.spike && !self.spike_disabled;
        let reset = ops.reset;
        if reset {
            self.v_mem = params.v_reset;
            self.refractory_remaining = params.t_refractory;
        }
        if spiked {
            self.theta += params.theta_plus;
        }
        StepOutcome {
            crossed,
            reset,
            spiked,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> LifParams {
        LifParams {
            v_threshold: 10.0,
            v_reset: 0.0,
            v_rest: 0.0,
            leak_amount: 0.5,
            t_refractory: 3,
            inhibition_strength: 1.0,
            theta_plus: 0.0,
            theta_decay: 1.0,
        }
    }

    #[test]
    fn rest_with_no_input_stays_at_rest() {
        let p = params();
        let mut n = LifNeuronState::at_rest(&p);
        for _ in 0..20 {
            assert!(!n.step(&p, 0.0, 0.0).spiked);
            assert_eq!(n.v_mem, p.v_rest);
        }
    }

    #[test]
    fn crossing_spikes_resets_and_enters_refractory() {
        let p = params();
        let mut n = LifNeuronState::at_rest(&p);
        n.v_mem = p.v_threshold - 1e-9;
        let out = n.step(&p, 1.0, 0.0);
        assert!(out.spiked && out.reset && out.crossed);
        assert_eq!(n.v_mem, p.v_reset);
        assert_eq!(n.refractory_remaining, p.t_refractory);
        for _ in 0..p.t_refractory {
            assert!(!n.step(&p, 100.0, 0.0).spiked);
        }
        assert!(n.step(&p, 100.0, 0.0).spiked);
    }

    #[test]
    fn constant_input_matches_closed_form() {
        // v(T) = v_rest + T (I - L) while below threshold
        let p = LifParams {
            v_threshold: 1e9,
            ..params()
        };
        let input = 0.75;
        let mut n = LifNeuronState::at_rest(&p);
        for t in 1..=200u32 {
            n.step(&p, input, 0.0);
            let expected = p.v_rest + f64::from(t) * (input - p.leak_amount);
            assert!((n.v_mem - expected).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn adaptive_threshold_grows_and_decays() {
        let p = LifParams {
            theta_plus: 2.0,
            theta_decay: 0.5,
            t_refractory: 0,
            ..params()
        };
        let mut n = LifNeuronState::at_rest(&p);
        assert!(n.step(&p, 20.0, 0.0).spiked);
        assert_eq!(n.theta, 2.0);
        n.step(&p, 0.0, 0.0);
        assert_eq!(n.theta, 1.0);
        assert!(p.validate().is_ok());
        assert_eq!(p.frozen().theta_plus, 0.0);
    }

    #[test]
    fn inhibition_is_floored_at_rest() {
        let p = params();
        let mut n = LifNeuronState::at_rest(&p);
        n.v_mem = 3.0;
        n.step(&p, 0.0, 50.0);
        assert_eq!(n.v_mem, p.v_rest);
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = LifParams {
            v_reset: 1.0,
            v_rest: 0.0,
            ..params()
        };
        assert!(bad.validate().is_err());
        let bad = LifParams {
            theta_decay: 1.5,
            ..params()
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn healthy_neuron_respects_refractory_and_threshold(
            v in 0.0f64..20.0,
            theta in 0.0f64..5.0,
            refractory in 0u32..4,
            input in 0.0f64..20.0,
            inhibition in 0.0f64..5.0,
        ) {
            let p = params();
            let mut n = LifNeuronState::at_rest(&p);
            n.v_mem = v;
            n.theta = theta;
            n.refractory_remaining = refractory;
            let out = n.step(&p, input, inhibition);
            if refractory > 0 {
                prop_assert!(!out.spiked);
            }
            if v + input < p.v_threshold + theta {
                prop_assert!(!out.spiked);
            }
        }
    }
}
