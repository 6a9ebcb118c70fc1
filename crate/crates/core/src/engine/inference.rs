use serde::{Deserialize, Serialize};

use super::accumulate::accumulate_active;
use super::neuron::detect_and_protect;
use super::policy::{bound_weight, MitigationKind, MitigationPolicy};
use crate::cost::{estimate_cost, CostParams, CostReport};
use crate::fault::{apply_bit_flips, Dims, FaultMap};
use crate::snn::{classify, LifNeuronState, LifParams, NeuronLabelAssignment, SpikeTrain, TrainedModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub crossbar_rows: usize,
    pub crossbar_cols: usize,
    /// Timesteps the threshold comparator must stay true before the
    /// protection logic declares the reset operation faulty.
    pub reset_fault_detect_cycles: u32,
    pub cost: CostParams,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            crossbar_rows: 256,
            crossbar_cols: 256,
            reset_fault_detect_cycles: 2,
            cost: CostParams::default(),
        }
    }
}

impl EngineConfig {
    pub fn crossbar(&self) -> Dims {
        Dims::new(self.crossbar_rows, self.crossbar_cols)
    }

    pub fn validate(&self) -> Result<()> {
        if self.crossbar_rows == 0 || self.crossbar_cols == 0 {
            return Err(Error::Config("crossbar dimensions must be positive".into()));
        }
        if self.reset_fault_detect_cycles < 2 {
            return Err(Error::Config("reset_fault_detect_cycles must be at least 2".into()));
        }
        self.cost.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceOutcome {
    pub spike_counts: Vec<u32>,
    /// `None` when no labelled neuron fired.
    pub prediction: Option<usize>,
    /// Neurons whose spike generation the protection logic switched off.
    pub disabled: Vec<usize>,
    pub cost: CostReport,
}

/// A compute engine loaded with one model, one fault map and one policy.
///
/// Loading applies the register bit flips and, for bounding policies, runs
/// every register through the bounding comparator once; the result stays
/// valid for every presentation until the next load.
#[derive(Debug, Clone)]
pub struct Engine {
    rows: usize,
    cols: usize,
    scale: f64,
    effective: Vec<u8>,
    policy: MitigationPolicy,
    lif: LifParams,
    neurons: Vec<LifNeuronState>,
    faults: Vec<Option<crate::fault::NeuronFaultKind>>,
    assignment: NeuronLabelAssignment,
    detect_cycles: u32,
    cost: CostReport,
    acc: Vec<u32>,
}

impl Engine {
    pub fn prepare(
        model: &TrainedModel,
        fault_map: &FaultMap,
        policy: &MitigationPolicy,
        config: &EngineConfig,
    ) -> Result<Self> {
        config.validate()?;
        let dims = model.dims();
        if fault_map.dims != dims {
            return Err(Error::invalid(format!(
                "fault map drawn for {} but the model is {}",
                fault_map.dims, dims
            )));
        }
        let faulty = apply_bit_flips(&model.weights, fault_map)?;
        let effective: Vec<u8> = faulty.codes().iter().map(|&c| bound_weight(c, policy)).collect();
        let lif = model.lif.frozen();
        let neurons = model
            .thetas
            .iter()
            .map(|&theta| LifNeuronState {
                theta,
                ..LifNeuronState::at_rest(&lif)
            })
            .collect();
        let faults = (0..dims.cols).map(|c| fault_map.neuron_fault(c)).collect();
        // the re-execution engine is costed per copy; TmrEngine reports the total
        let cost_kind = match policy.kind {
            MitigationKind::ReExecutionTMR => MitigationKind::NoMitigation,
            k => k,
        };
        let cost = estimate_cost(cost_kind, dims, config.crossbar(), 1, &config.cost)?;
        Ok(Self {
            rows: dims.rows,
            cols: dims.cols,
            scale: model.weights.scale(),
            effective,
            policy: *policy,
            lif,
            neurons,
            faults,
            assignment: model.assignment.clone(),
            detect_cycles: config.reset_fault_detect_cycles,
            cost,
            acc: vec![0; dims.cols],
        })
    }

    /// Weight codes as seen by the accumulators, row-major.
    pub fn effective_weights(&self) -> &[u8] {
        &self.effective
    }

    pub fn policy(&self) -> &MitigationPolicy {
        &self.policy
    }

    /// Presents one input and simulates every timestep of it.
    pub fn infer(&mut self, input: &SpikeTrain) -> Result<InferenceOutcome> {
        if input.num_inputs() != self.rows {
            return Err(Error::invalid(format!(
                "input has {} lines but the crossbar has {} rows",
                input.num_inputs(),
                self.rows
            )));
        }
        if input.duration() == 0 {
            return Err(Error::invalid("input spike train is empty"));
        }
        for (n, &fault) in self.neurons.iter_mut().zip(&self.faults) {
            n.begin_presentation(&self.lif, fault);
        }
        let protect = self.policy.protects_neurons();
        let mut counts = vec![0u32; self.cols];
        let mut fired = vec![false; self.cols];
        let mut prev_total = 0u32;
        for t in 0..input.duration() {
            accumulate_active(input.active(t), &self.effective, self.cols, &self.policy, &mut self.acc);
            let mut total = 0u32;
            for (j, n) in self.neurons.iter_mut().enumerate() {
                let others = prev_total - u32::from(fired[j]);
                let inhibition = self.lif.inhibition_strength * f64::from(others);
                let current = f64::from(self.acc[j]) * self.scale;
                let out = n.step(&self.lif, current, inhibition);
                if protect {
                    detect_and_protect(n, out, self.detect_cycles);
                }
                fired[j] = out.spiked;
                if out.spiked {
                    counts[j] += 1;
                    total += 1;
                }
            }
            prev_total = total;
        }
        let prediction = classify(&counts, &self.assignment)?;
        let disabled = self
            .neurons
            .iter()
            .enumerate()
            .filter(|(_, n)| n.spike_disabled)
            .map(|(j, _)| j)
            .collect();
        let cost = CostReport {
            latency: self.cost.latency * input.duration() as f64,
            energy: self.cost.energy * input.duration() as f64,
            cycles: self.cost.cycles * input.duration() as u64,
            ..self.cost
        };
        Ok(InferenceOutcome {
            spike_counts: counts,
            prediction,
            disabled,
            cost,
        })
    }
}

/// One presentation of `input` on an engine loaded with `fault_map` under `policy`.
pub fn run_inference(
    model: &TrainedModel,
    input: &SpikeTrain,
    fault_map: &FaultMap,
    policy: &MitigationPolicy,
    config: &EngineConfig,
) -> Result<InferenceOutcome> {
    Engine::prepare(model, fault_map, policy, config)?.infer(input)
}
