//! Re-execution with majority voting against a single unmitigated run on a
//! small random network.
//!
//! cargo run --release --example tmr_baseline -- [RATE]

use rand::Rng;
use snn_fault_sim::engine::{Engine, EngineConfig, MitigationPolicy, TmrEngine};
use snn_fault_sim::fault::{generate_fault_map, FaultMap};
use snn_fault_sim::rng;
use snn_fault_sim::snn::{
    encode_poisson, CleanModelStats, LifParams, NeuronLabelAssignment, QuantizedWeightMatrix, TrainedModel,
};

fn main() -> snn_fault_sim::Result<()> {
    let rate: f64 = std::env::args().nth(1).map_or(Ok(0.01), |a| a.parse()).expect("RATE is a number");
    let (rows, cols, classes) = (64, 20, 4);
    let mut r = rng::seeded(5);
    let codes = (0..rows * cols).map(|_| r.random_range(0..64)).collect();
    let weights = QuantizedWeightMatrix::new(rows, cols, codes, 1.0 / 255.0)?;
    let model = TrainedModel {
        stats: CleanModelStats::from_weights(&weights),
        weights,
        thetas: vec![0.0; cols],
        lif: LifParams {
            v_threshold: 3.0,
            inhibition_strength: 0.5,
            ..LifParams::default()
        },
        assignment: NeuronLabelAssignment {
            num_classes: classes,
            labels: (0..cols).map(|c| Some((c % classes) as u8)).collect(),
        },
        training_seed: 0,
    };
    let cfg = EngineConfig::default();
    let inputs: Vec<_> = (0..200u64)
        .map(|k| {
            let img: Vec<u8> = (0..rows).map(|_| r.random()).collect();
            encode_poisson(&img, 50, 0.3, k)
        })
        .collect::<Result<_, _>>()?;

    // the fault-free predictions serve as ground truth
    let mut clean = Engine::prepare(&model, &FaultMap::empty(model.dims()), &MitigationPolicy::no_mitigation(), &cfg)?;
    let truth: Vec<_> = inputs.iter().map(|x| clean.infer(x).map(|o| o.prediction)).collect::<Result<_, _>>()?;

    let (mut single_ok, mut tmr_ok) = (0, 0);
    let mut costs = None;
    for seed in 0..10u64 {
        let map = generate_fault_map(model.dims(), rate, seed)?;
        let mut single = Engine::prepare(&model, &map, &MitigationPolicy::no_mitigation(), &cfg)?;
        let mut tmr = TmrEngine::prepare(&model, rate, seed, &cfg)?;
        for (x, t) in inputs.iter().zip(&truth) {
            let s = single.infer(x)?;
            let v = tmr.infer(x)?;
            single_ok += usize::from(s.prediction == *t);
            tmr_ok += usize::from(v.prediction == *t);
            costs.get_or_insert((s.cost, v.cost));
        }
    }
    let n = (10 * inputs.len()) as f64;
    println!("rate {rate}: agreement with the fault-free run");
    println!("  single execution {:.1}%", 100.0 * single_ok as f64 / n);
    println!("  three executions {:.1}%", 100.0 * tmr_ok as f64 / n);
    let (s, v) = costs.expect("inputs were evaluated");
    println!(
        "  cost per inference: {:.3e} s / {:.3e} J vs {:.3e} s / {:.3e} J",
        s.latency, s.energy, v.latency, v.energy
    );
    Ok(())
}
