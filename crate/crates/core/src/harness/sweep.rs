//! Fault-rate × fault-map × policy sweeps.
//!
//! Seeds: the model is trained from `derive_seed(master, TRAINING, 0)`, test
//! image `k` is encoded from `derive_seed(master, TEST_ENCODING, k)` and
//! fault map `m` is drawn from `derive_seed(master, FAULT_MAP, m)` for every
//! rate. Because a location faults when its uniform draw falls below the
//! rate, the maps of one seed are nested across rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::idx::{load_split, Split};
use crate::engine::{Engine, EngineConfig, MitigationKind, MitigationPolicy, TmrEngine};
use crate::fault::generate_fault_map;
use crate::rng::{derive_seed, domain};
use crate::snn::{encode_poisson, stdp_train, Dataset, SpikeTrain, TrainedModel};
use crate::{Error, Result};

/// One (policy, rate, fault map) cell. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub policy: MitigationKind,
    pub network: usize,
    pub rate: f64,
    pub map_seed: u64,
    pub accuracy: f64,
    pub latency_s: f64,
    pub energy_j: f64,
    pub area_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.policy
                .cmp(&b.policy)
                .then(a.rate.total_cmp(&b.rate))
                .then(a.map_seed.cmp(&b.map_seed))
        });
    }

    pub fn policies(&self) -> Vec<MitigationKind> {
        let mut p: Vec<_> = self.rows.iter().map(|r| r.policy).collect();
        p.sort();
        p.dedup();
        p
    }

    pub fn rates(&self) -> Vec<f64> {
        let mut r: Vec<_> = self.rows.iter().map(|r| r.rate).collect();
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    fn cell(&self, policy: MitigationKind, rate: f64) -> impl Iterator<Item = &SweepRow> {
        self.rows
            .iter()
            .filter(move |r| r.policy == policy && r.rate == rate)
    }

    /// Mean accuracy over the fault maps of one cell.
    pub fn mean_accuracy(&self, policy: MitigationKind, rate: f64) -> Option<f64> {
        mean(self.cell(policy, rate).map(|r| r.accuracy))
    }

    /// Mean (latency, energy, area) of a policy over all its rows.
    pub fn mean_cost(&self, policy: MitigationKind) -> Option<(f64, f64, f64)> {
        let rows: Vec<_> = self.rows.iter().filter(|r| r.policy == policy).collect();
        Some((
            mean(rows.iter().map(|r| r.latency_s))?,
            mean(rows.iter().map(|r| r.energy_j))?,
            mean(rows.iter().map(|r| r.area_norm))?,
        ))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (n, s) = values.fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    (n > 0).then(|| s / n as f64)
}

/// Loads the training and test subsets named by the config.
pub fn load_subsets(config: &ExperimentConfig) -> Result<(Dataset, Dataset)> {
    let train = load_split(&config.data_dir, Split::Train)?;
    let test = load_split(&config.data_dir, Split::Test)?;
    if config.train_subset > train.len() || config.test_subset > test.len() {
        return Err(Error::Config(format!(
            "subsets {}/{} exceed dataset sizes {}/{}",
            config.train_subset,
            config.test_subset,
            train.len(),
            test.len()
        )));
    }
    Ok((train.head(config.train_subset), test.head(config.test_subset)))
}

/// Loads `config.model` if set, otherwise trains the clean model.
pub fn prepare_model(config: &ExperimentConfig, train: &Dataset) -> Result<TrainedModel> {
    match &config.model {
        Some(path) => {
            let model = TrainedModel::load(path)?;
            if model.dims().cols != config.network_size || model.dims().rows != train.pixels() {
                return Err(Error::Config(format!(
                    "model {} is {} but the config asks for {}x{}",
                    path.display(),
                    model.dims(),
                    train.pixels(),
                    config.network_size
                )));
            }
            Ok(model)
        }
        None => stdp_train(
            train,
            &config.training_config(),
            derive_seed(config.master_seed, domain::TRAINING, 0),
        ),
    }
}

/// Encodes the test set with the per-image seeds of `master_seed`.
pub fn encode_test_set(test: &Dataset, config: &ExperimentConfig) -> Result<Vec<SpikeTrain>> {
    test.images
        .iter()
        .enumerate()
        .map(|(k, img)| {
            encode_poisson(
                img,
                config.encoding.duration,
                config.encoding.max_rate,
                derive_seed(config.master_seed, domain::TEST_ENCODING, k as u64),
            )
        })
        .collect()
}

/// Accuracy and per-inference cost of one loaded engine over a test set.
pub fn evaluate(engine: &mut Engine, inputs: &[SpikeTrain], labels: &[u8]) -> Result<(f64, crate::cost::CostReport)> {
    let mut correct = 0usize;
    let mut cost = None;
    for (input, &label) in inputs.iter().zip(labels) {
        let out = engine.infer(input)?;
        correct += usize::from(out.prediction == Some(usize::from(label)));
        cost.get_or_insert(out.cost);
    }
    let cost = cost.ok_or_else(|| Error::invalid("empty test set"))?;
    Ok((correct as f64 / inputs.len() as f64, cost))
}

fn evaluate_tmr(engine: &mut TmrEngine, inputs: &[SpikeTrain], labels: &[u8]) -> Result<(f64, crate::cost::CostReport)> {
    let mut correct = 0usize;
    let mut cost = None;
    for (input, &label) in inputs.iter().zip(labels) {
        let out = engine.infer(input)?;
        correct += usize::from(out.prediction == Some(usize::from(label)));
        cost.get_or_insert(out.cost);
    }
    let cost = cost.ok_or_else(|| Error::invalid("empty test set"))?;
    Ok((correct as f64 / inputs.len() as f64, cost))
}

fn run_cell(
    model: &TrainedModel,
    inputs: &[SpikeTrain],
    labels: &[u8],
    policies: &[MitigationKind],
    engine_cfg: &EngineConfig,
    rate: f64,
    map_seed: u64,
) -> Result<Vec<SweepRow>> {
    let map = generate_fault_map(model.dims(), rate, map_seed)?;
    policies
        .iter()
        .map(|&kind| {
            let (accuracy, cost) = match kind {
                MitigationKind::ReExecutionTMR => {
                    let mut tmr = TmrEngine::prepare(model, rate, map_seed, engine_cfg)?;
                    evaluate_tmr(&mut tmr, inputs, labels)?
                }
                _ => {
                    let policy = MitigationPolicy::from_stats(kind, &model.stats);
                    let mut engine = Engine::prepare(model, &map, &policy, engine_cfg)?;
                    evaluate(&mut engine, inputs, labels)?
                }
            };
            Ok(SweepRow {
                policy: kind,
                network: model.dims().cols,
                rate,
                map_seed,
                accuracy,
                latency_s: cost.latency,
                energy_j: cost.energy,
                area_norm: cost.area,
            })
        })
        .collect()
}

/// Runs every (policy, rate, map) cell of `config` on a given model and test set.
pub fn run_sweep_with_model(model: &TrainedModel, test: &Dataset, config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let inputs = encode_test_set(test, config)?;
    let engine_cfg = config.engine_config();
    let cells: Vec<(f64, u64)> = config
        .fault_rates
        .iter()
        .flat_map(|&rate| {
            (0..config.num_fault_maps)
                .map(move |m| (rate, derive_seed(config.master_seed, domain::FAULT_MAP, m as u64)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let per_cell: Vec<Result<Vec<SweepRow>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(rate, seed)| run_cell(model, &inputs, &test.labels, &config.policies, &engine_cfg, rate, seed))
            .collect()
    });
    let mut result = SweepResult::default();
    for rows in per_cell {
        result.rows.extend(rows?);
    }
    result.sort();
    Ok(result)
}

/// Full pipeline: load data, train (or load) the clean model, sweep.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    let (train, test) = load_subsets(config)?;
    let model = prepare_model(config, &train)?;
    run_sweep_with_model(&model, &test, config)
}
