#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::Rng;
use snn_fault_sim::harness::ExperimentConfig;
use snn_fault_sim::rng;
use snn_fault_sim::snn::{CleanModelStats, LifParams, NeuronLabelAssignment, QuantizedWeightMatrix, TrainedModel};

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// MNIST directory: `$SNN_DATA_DIR` or `<workspace>/data/mnist`.
pub fn data_dir() -> PathBuf {
    std::env::var_os("SNN_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data/mnist"))
}

/// The desk-scale experiment config with the data directory resolved.
pub fn desk_config() -> ExperimentConfig {
    let path = workspace_root().join("configs/desk_scale.toml");
    let mut cfg = ExperimentConfig::load(&path, &[]).expect("configs/desk_scale.toml loads");
    cfg.data_dir = data_dir();
    cfg
}

pub fn small_lif() -> LifParams {
    LifParams {
        v_threshold: 3.0,
        v_reset: 0.0,
        v_rest: 0.0,
        leak_amount: 0.1,
        t_refractory: 1,
        inhibition_strength: 0.5,
        theta_plus: 0.0,
        theta_decay: 1.0,
    }
}

/// Random weights below `max_code`, neurons labelled round-robin over `classes`.
pub fn synthetic_model(rows: usize, cols: usize, classes: usize, max_code: u8, seed: u64) -> TrainedModel {
    let mut r = rng::seeded(seed);
    let codes = (0..rows * cols).map(|_| r.random_range(0..=max_code)).collect();
    let weights = QuantizedWeightMatrix::new(rows, cols, codes, 1.0 / 255.0).unwrap();
    let stats = CleanModelStats::from_weights(&weights);
    TrainedModel {
        weights,
        thetas: vec![0.0; cols],
        lif: small_lif(),
        stats,
        assignment: NeuronLabelAssignment {
            num_classes: classes,
            labels: (0..cols).map(|c| Some((c % classes) as u8)).collect(),
        },
        training_seed: seed,
    }
}
