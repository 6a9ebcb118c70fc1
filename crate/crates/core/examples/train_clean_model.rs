//! Trains the clean network on an MNIST subset and prints model statistics.
//!
//! cargo run --release --example train_clean_model -- [key=value ...]
//!
//! Arguments are config overrides, e.g. `train_subset=2000 stdp.column_norm=30`.
//! The dataset directory defaults to `data/mnist` (or `$SNN_DATA_DIR`).

use snn_fault_sim::engine::{Engine, MitigationPolicy};
use snn_fault_sim::fault::FaultMap;
use snn_fault_sim::harness::{encode_test_set, load_subsets, prepare_model, ExperimentConfig};

fn main() -> snn_fault_sim::Result<()> {
    let mut overrides: Vec<String> = std::env::args().skip(1).collect();
    if let Ok(dir) = std::env::var("SNN_DATA_DIR") {
        overrides.insert(0, format!("data_dir={dir:?}"));
    }
    let cfg = ExperimentConfig::from_toml_with_overrides("", &overrides)?;
    let (train, test) = load_subsets(&cfg)?;
    let started = std::time::Instant::now();
    let model = prepare_model(&cfg, &train)?;
    println!("trained {} on {} images in {:.1?}", model.dims(), train.len(), started.elapsed());

    let (tmin, tmax) = model
        .thetas
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &t| (a.min(t), b.max(t)));
    let labelled = model.assignment.labels.iter().flatten().count();
    let mut per_class = vec![0usize; model.assignment.num_classes];
    for l in model.assignment.labels.iter().flatten() {
        per_class[usize::from(*l)] += 1;
    }
    println!("theta range [{tmin:.3}, {tmax:.3}], {labelled} neurons labelled, per class {per_class:?}");
    let nonzero = model.weights.codes().iter().filter(|&&c| c > 0).count();
    println!(
        "wgh_max {}, wgh_hp {}, nonzero codes {:.1}%",
        model.stats.wgh_max,
        model.stats.wgh_hp,
        100.0 * nonzero as f64 / model.weights.codes().len() as f64
    );

    let inputs = encode_test_set(&test, &cfg)?;
    let mut engine = Engine::prepare(
        &model,
        &FaultMap::empty(model.dims()),
        &MitigationPolicy::no_mitigation(),
        &cfg.engine_config(),
    )?;
    let (mut correct, mut silent, mut spikes) = (0usize, 0usize, 0u64);
    for (input, &label) in inputs.iter().zip(&test.labels) {
        let out = engine.infer(input)?;
        spikes += out.spike_counts.iter().map(|&c| u64::from(c)).sum::<u64>();
        silent += usize::from(out.prediction.is_none());
        correct += usize::from(out.prediction == Some(usize::from(label)));
    }
    println!(
        "clean accuracy {:.2}% on {} images; {:.1} output spikes per image; {} without prediction",
        100.0 * correct as f64 / test.len() as f64,
        test.len(),
        spikes as f64 / test.len() as f64,
        silent
    );
    Ok(())
}
