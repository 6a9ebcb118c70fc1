//! Unsupervised STDP training of the clean network.
//!
//! Pair-based STDP with exponentially decaying pre- and post-synaptic
//! traces. A presynaptic spike depresses the synapse by `eta_pre` times the
//! postsynaptic trace; a postsynaptic spike moves every incoming synapse by
//! `eta_post * (x_pre - x_target)`, which potentiates recently active inputs
//! and depresses silent ones. Weights are clipped to `[0, w_limit]`, each
//! neuron's incoming weights are optionally renormalized to a fixed sum
//! after every image, and the final weights are quantized to 8-bit codes
//! with `scale = w_limit / 255`. Neurons are then labelled by their
//! responses to the training images.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    encode_poisson, CleanModelStats, Dataset, LifNeuronState, LifParams, NeuronLabelAssignment,
    QuantizedWeightMatrix, TrainedModel,
};
use crate::engine::{Engine, EngineConfig, MitigationPolicy};
use crate::fault::FaultMap;
use crate::rng::{self, domain};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StdpConfig {
    /// Learning rate of the presynaptic (depressing) update.
    pub eta_pre: f64,
    /// Learning rate of the postsynaptic (potentiating) update.
    pub eta_post: f64,
    /// Per-timestep retention of the presynaptic trace.
    pub pre_trace_decay: f64,
    /// Per-timestep retention of the postsynaptic trace.
    pub post_trace_decay: f64,
    /// Presynaptic trace level that separates potentiation from depression.
    pub x_target: f64,
    /// Upper clip of real-valued weights; maps to code 255.
    pub w_limit: f64,
    /// Initial weights are uniform in `[0, init_max)`.
    pub init_max: f64,
    /// Target sum of each neuron's incoming weights, or no normalization.
    pub column_norm: Option<f64>,
}

impl Default for StdpConfig {
    fn default() -> Self {
        Self {
            eta_pre: 1e-4,
            eta_post: 1e-2,
            pre_trace_decay: 0.95,
            post_trace_decay: 0.95,
            x_target: 0.4,
            w_limit: 1.0,
            init_max: 0.3,
            column_norm: Some(78.4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingConfig {
    pub network_size: usize,
    pub epochs: usize,
    /// Timesteps per training presentation.
    pub duration: usize,
    pub max_rate: f64,
    /// A presentation producing fewer output spikes is repeated with a higher rate.
    pub min_output_spikes: u32,
    pub rate_boost: f64,
    pub max_boosts: u32,
    pub lif: LifParams,
    pub stdp: StdpConfig,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            network_size: 100,
            epochs: 1,
            duration: 100,
            max_rate: 0.25,
            min_output_spikes: 3,
            rate_boost: 0.1,
            max_boosts: 4,
            lif: LifParams::default(),
            stdp: StdpConfig::default(),
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        self.lif.validate()?;
        let s = &self.stdp;
        if self.network_size == 0 || self.duration == 0 {
            return Err(Error::invalid("network_size and duration must be positive"));
        }
        if !(self.max_rate > 0.0 && self.max_rate <= 1.0) {
            return Err(Error::invalid("max_rate must lie in (0, 1]"));
        }
        if !(s.w_limit > 0.0) || s.init_max < 0.0 || s.init_max > s.w_limit {
            return Err(Error::invalid("need 0 <= init_max <= w_limit and w_limit > 0"));
        }
        if ![s.pre_trace_decay, s.post_trace_decay].iter().all(|d| (0.0..=1.0).contains(d)) {
            return Err(Error::invalid("trace decays must lie in [0, 1]"));
        }
        if s.eta_pre < 0.0 || s.eta_post < 0.0 {
            return Err(Error::invalid("learning rates must be non-negative"));
        }
        if s.column_norm.is_some_and(|n| !(n > 0.0)) {
            return Err(Error::invalid("column_norm must be positive"));
        }
        Ok(())
    }
}

/// Real-valued network state during training.
struct Trainer<'a> {
    cfg: &'a TrainingConfig,
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    neurons: Vec<LifNeuronState>,
    pre_trace: Vec<f64>,
    post_trace: Vec<f64>,
    current: Vec<f64>,
    fired: Vec<bool>,
}

impl<'a> Trainer<'a> {
    fn new(cfg: &'a TrainingConfig, rows: usize, seed: u64) -> Self {
        let cols = cfg.network_size;
        let mut rng = rng::substream(seed, 0);
        let weights = (0..rows * cols)
            .map(|_| rng.random::<f64>() * cfg.stdp.init_max)
            .collect();
        let mut t = Self {
            cfg,
            rows,
            cols,
            weights,
            neurons: vec![LifNeuronState::at_rest(&cfg.lif); cols],
            pre_trace: vec![0.0; rows],
            post_trace: vec![0.0; cols],
            current: vec![0.0; cols],
            fired: vec![false; cols],
        };
        t.normalize();
        t
    }

    /// Presents one image; returns the number of output spikes.
    fn present(&mut self, image: &[u8], max_rate: f64, seed: u64) -> Result<u32> {
        let lif = &self.cfg.lif;
        let stdp = &self.cfg.stdp;
        let train = encode_poisson(image, self.cfg.duration, max_rate, seed)?;
        for n in &mut self.neurons {
            n.begin_presentation(lif, None);
        }
        self.pre_trace.fill(0.0);
        self.post_trace.fill(0.0);
        self.fired.fill(false);
        let cols = self.cols;
        let mut prev_total = 0u32;
        let mut spikes = 0u32;
        for t in 0..train.duration() {
            let active = train.active(t);
            self.current.fill(0.0);
            for &i in active {
                let row = &self.weights[i as usize * cols..(i as usize + 1) * cols];
                for (c, &w) in self.current.iter_mut().zip(row) {
                    *c += w;
                }
            }
            let mut total = 0;
            for j in 0..cols {
                let others = prev_total - u32::from(self.fired[j]);
                let inhibition = lif.inhibition_strength * f64::from(others);
                let out = self.neurons[j].step(lif, self.current[j], inhibition);
                self.fired[j] = out.spiked;
                total += u32::from(out.spiked);
            }
            prev_total = total;
            spikes += total;

            for x in &mut self.pre_trace {
                *x *= stdp.pre_trace_decay;
            }
            for x in &mut self.post_trace {
                *x *= stdp.post_trace_decay;
            }
            for &i in active {
                let i = i as usize;
                self.pre_trace[i] = 1.0;
                if stdp.eta_pre > 0.0 {
                    let row = &mut self.weights[i * cols..(i + 1) * cols];
                    for (w, &post) in row.iter_mut().zip(&self.post_trace) {
                        *w = (*w - stdp.eta_pre * post).max(0.0);
                    }
                }
            }
            for j in 0..cols {
                if !self.fired[j] {
                    continue;
                }
                self.post_trace[j] = 1.0;
                for i in 0..self.rows {
                    let w = &mut self.weights[i * cols + j];
                    *w = (*w + stdp.eta_post * (self.pre_trace[i] - stdp.x_target)).clamp(0.0, stdp.w_limit);
                }
            }
            debug_assert!(self.weights.iter().all(|&w| (0.0..=stdp.w_limit).contains(&w)));
        }
        Ok(spikes)
    }

    fn normalize(&mut self) {
        let Some(target) = self.cfg.stdp.column_norm else {
            return;
        };
        let limit = self.cfg.stdp.w_limit;
        for j in 0..self.cols {
            let sum: f64 = (0..self.rows).map(|i| self.weights[i * self.cols + j]).sum();
            if sum <= 0.0 {
                continue;
            }
            let factor = target / sum;
            for i in 0..self.rows {
                let w = &mut self.weights[i * self.cols + j];
                *w = (*w * factor).min(limit);
            }
        }
    }
}

/// Trains a clean model and labels its neurons.
pub fn stdp_train(dataset: &Dataset, config: &TrainingConfig, seed: u64) -> Result<TrainedModel> {
    if dataset.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    if dataset.distinct_classes() < 2 {
        return Err(Error::invalid("training set must contain at least two classes"));
    }
    config.validate()?;
    let rows = dataset.pixels();
    let mut trainer = Trainer::new(config, rows, seed);

    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut presentation = 0u64;
    for epoch in 0..config.epochs {
        if epoch > 0 {
            order.shuffle(&mut rng::substream(seed, epoch as u64));
        }
        for &k in &order {
            let image = &dataset.images[k];
            let mut rate = config.max_rate;
            let mut boosts = 0;
            loop {
                let enc_seed = rng::derive_seed(seed, domain::TRAINING, presentation);
                presentation += 1;
                let spikes = trainer.present(image, rate, enc_seed)?;
                trainer.normalize();
                if spikes >= config.min_output_spikes || boosts >= config.max_boosts {
                    break;
                }
                boosts += 1;
                rate = (rate + config.rate_boost).min(1.0);
            }
        }
    }

    let weights = QuantizedWeightMatrix::from_real(rows, trainer.cols, &trainer.weights, config.stdp.w_limit)?;
    let stats = CleanModelStats::from_weights(&weights);
    let thetas = trainer.neurons.iter().map(|n| n.theta).collect();
    let mut model = TrainedModel {
        weights,
        thetas,
        lif: config.lif,
        stats,
        assignment: NeuronLabelAssignment {
            num_classes: dataset.num_classes(),
            labels: vec![None; config.network_size],
        },
        training_seed: seed,
    };
    model.assignment = label_neurons(&model, dataset, config.duration, config.max_rate, seed)?;
    Ok(model)
}

/// Labels each neuron with the class it fires most for, running the
/// quantized clean model on `dataset` without faults.
pub fn label_neurons(
    model: &TrainedModel,
    dataset: &Dataset,
    duration: usize,
    max_rate: f64,
    seed: u64,
) -> Result<NeuronLabelAssignment> {
    let num_classes = dataset.num_classes();
    let mut engine = Engine::prepare(
        model,
        &FaultMap::empty(model.dims()),
        &MitigationPolicy::no_mitigation(),
        &EngineConfig::default(),
    )?;
    let mut responses = vec![vec![0u64; num_classes]; model.dims().cols];
    let mut class_sizes = vec![0u64; num_classes];
    for (k, (image, label)) in dataset.iter().enumerate() {
        let train = encode_poisson(image, duration, max_rate, rng::derive_seed(seed, domain::LABELING, k as u64))?;
        let out = engine.infer(&train)?;
        class_sizes[usize::from(label)] += 1;
        for (row, &count) in responses.iter_mut().zip(&out.spike_counts) {
            row[usize::from(label)] += u64::from(count);
        }
    }
    NeuronLabelAssignment::from_responses(&responses, &class_sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two 4x4 patterns (left half / right half bright).
    fn toy() -> Dataset {
        let left: Vec<u8> = (0..16).map(|p| if p % 4 < 2 { 255 } else { 0 }).collect();
        let right: Vec<u8> = left.iter().map(|&v| 255 - v).collect();
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for k in 0..40 {
            if k % 2 == 0 {
                images.push(left.clone());
                labels.push(0);
            } else {
                images.push(right.clone());
                labels.push(1);
            }
        }
        Dataset::new(4, 4, images, labels).unwrap()
    }

    fn toy_config() -> TrainingConfig {
        TrainingConfig {
            network_size: 4,
            duration: 50,
            max_rate: 0.5,
            stdp: StdpConfig {
                column_norm: Some(4.0),
                ..StdpConfig::default()
            },
            lif: LifParams {
                v_threshold: 2.0,
                ..LifParams::default()
            },
            ..TrainingConfig::default()
        }
    }

    #[test]
    fn weights_stay_in_range_and_stats_match() {
        let m = stdp_train(&toy(), &toy_config(), 5).unwrap();
        let max = *m.weights.codes().iter().max().unwrap();
        assert_eq!(m.stats.wgh_max, max);
        assert_eq!(m.weights.rows(), 16);
        assert_eq!(m.weights.cols(), 4);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = stdp_train(&toy(), &toy_config(), 5).unwrap();
        let b = stdp_train(&toy(), &toy_config(), 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn learns_the_toy_problem() {
        let m = stdp_train(&toy(), &toy_config(), 5).unwrap();
        let labels: Vec<_> = m.assignment.labels.iter().flatten().collect();
        assert!(labels.contains(&&0) && labels.contains(&&1), "{:?}", m.assignment);
    }

    #[test]
    fn rejects_degenerate_sets() {
        let d = toy();
        let single = Dataset::new(4, 4, vec![d.images[0].clone()], vec![0]).unwrap();
        assert!(stdp_train(&single, &toy_config(), 1).is_err());
        let empty = Dataset::new(4, 4, vec![], vec![]).unwrap();
        assert!(stdp_train(&empty, &toy_config(), 1).is_err());
    }
}
