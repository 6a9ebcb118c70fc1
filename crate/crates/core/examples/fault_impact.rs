//! Separates the accuracy impact of faulty synapses from faulty neurons.
//!
//! cargo run --release --example fault_impact -- [key=value ...]
//!
//! For each policy and fault map at the highest configured rate, evaluates the
//! test subset with the full map, with only its synapse bit flips and with
//! only its neuron faults. Set `model=PATH` to skip training.

use std::collections::BTreeMap;

use snn_fault_sim::engine::{Engine, MitigationKind, MitigationPolicy};
use snn_fault_sim::fault::{generate_fault_map, FaultMap, NeuronFaultKind};
use snn_fault_sim::harness::{encode_test_set, evaluate, load_subsets, prepare_model, ExperimentConfig};
use snn_fault_sim::rng::{derive_seed, domain};

fn main() -> snn_fault_sim::Result<()> {
    let mut overrides: Vec<String> = std::env::args().skip(1).collect();
    if let Ok(dir) = std::env::var("SNN_DATA_DIR") {
        overrides.insert(0, format!("data_dir={dir:?}"));
    }
    let cfg = ExperimentConfig::from_toml_with_overrides("", &overrides)?;
    let (train, test) = load_subsets(&cfg)?;
    let model = prepare_model(&cfg, &train)?;
    let inputs = encode_test_set(&test, &cfg)?;
    let rate = cfg.fault_rates.iter().copied().fold(0.0, f64::max);
    let engine_cfg = cfg.engine_config();

    let mut clean = Engine::prepare(
        &model,
        &FaultMap::empty(model.dims()),
        &MitigationPolicy::no_mitigation(),
        &engine_cfg,
    )?;
    let (clean_acc, _) = evaluate(&mut clean, &inputs, &test.labels)?;
    println!(
        "clean accuracy {:.2}%  wgh_max {}  wgh_hp {}  rate {rate}",
        100.0 * clean_acc,
        model.stats.wgh_max,
        model.stats.wgh_hp
    );

    let kinds: Vec<MitigationKind> = cfg.policies.iter().copied().filter(|k| *k != MitigationKind::ReExecutionTMR).collect();
    let mut sums: BTreeMap<(MitigationKind, &str), f64> = BTreeMap::new();
    for m in 0..cfg.num_fault_maps {
        let full = generate_fault_map(model.dims(), rate, derive_seed(cfg.master_seed, domain::FAULT_MAP, m as u64))?;
        let synapses = FaultMap {
            neuron_faults: Default::default(),
            ..full.clone()
        };
        let neurons = FaultMap {
            synapse_flips: Vec::new(),
            ..full.clone()
        };
        let resets_only = FaultMap {
            synapse_flips: Vec::new(),
            neuron_faults: full
                .neuron_faults
                .iter()
                .filter(|(_, k)| **k == NeuronFaultKind::VmemReset)
                .map(|(c, k)| (*c, *k))
                .collect(),
            ..full.clone()
        };
        for &kind in &kinds {
            let policy = MitigationPolicy::from_stats(kind, &model.stats);
            for (name, map) in [("full", &full), ("synapses", &synapses), ("neurons", &neurons), ("resets", &resets_only)] {
                let mut engine = Engine::prepare(&model, map, &policy, &engine_cfg)?;
                let (acc, _) = evaluate(&mut engine, &inputs, &test.labels)?;
                *sums.entry((kind, name)).or_default() += acc;
            }
        }
    }
    println!("{:<14} {:>9} {:>9} {:>9} {:>9}", "policy", "full", "synapses", "neurons", "resets");
    for &kind in &kinds {
        let cell = |name| 100.0 * sums[&(kind, name)] / cfg.num_fault_maps as f64;
        println!(
            "{:<14} {:>8.2}% {:>8.2}% {:>8.2}% {:>8.2}%",
            kind.name(),
            cell("full"),
            cell("synapses"),
            cell("neurons"),
            cell("resets")
        );
    }
    Ok(())
}
