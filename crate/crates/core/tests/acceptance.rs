//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.
//!
//! The MNIST criteria read the IDX files from `$SNN_DATA_DIR` or
//! `<workspace>/data/mnist` (see `scripts/fetch_mnist.sh`).

use std::time::Instant;

use rand::Rng;
use snn_fault_sim::cost::{estimate_cost, CostParams};
use snn_fault_sim::engine::{
    bound_weight, column_accumulate_raw, Engine, EngineConfig, MitigationKind, MitigationPolicy,
};
use snn_fault_sim::fault::{generate_fault_map, Dims, FaultMap, NeuronFaultKind};
use snn_fault_sim::harness::{
    encode_test_set, load_subsets, prepare_model, run_sweep, run_sweep_with_model, ExperimentConfig,
};
use snn_fault_sim::rng;
use snn_fault_sim::snn::{encode_poisson, CleanModelStats, Dataset, SpikeTrain, TrainedModel};

mod common;

struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { name, pass, detail }
}

const BNP: [MitigationKind; 3] = [MitigationKind::BnP1, MitigationKind::BnP2, MitigationKind::BnP3];

fn bounding_oracle() -> Verdict {
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut cases = 0usize;
    for kind in BNP {
        for th in 0..=255u8 {
            let def = match kind {
                MitigationKind::BnP1 => 0,
                MitigationKind::BnP2 => th,
                _ => th / 2,
            };
            let policy = MitigationPolicy::custom(kind, th, def).unwrap();
            for w in 0..=255u8 {
                let expected = if w >= th { def } else { w };
                mismatches += usize::from(bound_weight(w, &policy) != expected);
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "weight bounding exhaustive oracle",
        mismatches == 0 && cases == 3 * 65536 && secs < 1.0,
        format!("{cases} cases, {mismatches} mismatches, {secs:.3} s"),
    )
}

fn fault_rate_statistics() -> Verdict {
    let dims = Dims::new(784, 100);
    let maps = 1000u64;
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for rate in [0.001, 0.01, 0.1] {
        let (mut syn, mut neu) = (0usize, 0usize);
        for seed in 0..maps {
            let m = generate_fault_map(dims, rate, rng::derive_seed(7, 3, seed)).unwrap();
            syn += m.synapse_flips.len();
            neu += m.neuron_faults.len();
        }
        for (total, n, what) in [(syn, dims.synapse_bit_locations(), "synapse"), (neu, dims.cols, "neuron")] {
            let mean = total as f64 / maps as f64;
            let expected = n as f64 * rate;
            let sigma = (n as f64 * rate * (1.0 - rate) / maps as f64).sqrt();
            let z = (mean - expected) / sigma;
            worst = worst.max(z.abs());
            details.push(format!("{what}@{rate}: z={z:+.2}"));
        }
    }
    verdict(
        "fault-rate binomial statistics",
        worst <= 3.0,
        format!("{maps} maps per rate, {}", details.join(", ")),
    )
}

fn burst_protection() -> Verdict {
    // neuron 0 reset-faulty; neuron 1 carries the largest weight
    let mut model = common::synthetic_model(16, 2, 2, 40, 1);
    let mut w = model.weights.map_codes(|_| 40);
    w.set(0, 1, 200);
    model.weights = w;
    model.stats = CleanModelStats::from_weights(&model.weights);
    let mut map = FaultMap::empty(model.dims());
    map.neuron_faults.insert(0, NeuronFaultKind::VmemReset);
    let input = SpikeTrain::saturated(16, 100);
    let cfg = EngineConfig::default();
    let count = |policy: &MitigationPolicy| {
        Engine::prepare(&model, &map, policy, &cfg).unwrap().infer(&input).unwrap().spike_counts[0]
    };
    let unmitigated = count(&MitigationPolicy::no_mitigation());
    let protected: Vec<u32> = BNP
        .iter()
        .map(|&k| count(&MitigationPolicy::from_stats(k, &model.stats)))
        .collect();

    let mut r = rng::seeded(31);
    let mut false_disables = 0usize;
    for trial in 0..10_000u64 {
        let m = common::synthetic_model(8, 4, 2, r.random_range(1..=255), trial);
        let kind = BNP[r.random_range(0..3)];
        let policy = MitigationPolicy::from_stats(kind, &m.stats);
        let img: Vec<u8> = (0..8).map(|_| r.random()).collect();
        let x = encode_poisson(&img, 30, r.random_range(0.1..1.0), trial).unwrap();
        let mut e = Engine::prepare(&m, &FaultMap::empty(m.dims()), &policy, &cfg).unwrap();
        false_disables += e.infer(&x).unwrap().disabled.len();
    }
    verdict(
        "reset-fault burst and protection",
        unmitigated >= 50 && protected.iter().all(|&c| c <= 2) && false_disables == 0,
        format!(
            "no mitigation {unmitigated} spikes / 100 steps, BnP1-3 {protected:?}, {false_disables} fault-free disables in 10^4 trials"
        ),
    )
}

fn cost_ratios() -> Verdict {
    let p = CostParams::default();
    let net = Dims::new(784, 100);
    let xbar = Dims::new(256, 256);
    let c = |k| estimate_cost(k, net, xbar, 350, &p).unwrap();
    let base = c(MitigationKind::NoMitigation);
    let tmr = c(MitigationKind::ReExecutionTMR);
    let eps = 4.0 * f64::EPSILON;
    let rel = |a: f64, b: f64| (a - b).abs() <= eps * b.abs();
    let mut ok = rel(tmr.latency / base.latency, 3.0) && rel(tmr.energy / base.energy, 3.0);
    for k in BNP {
        let b = c(k);
        ok &= rel(b.latency / base.latency, 1.06) && b.energy / base.energy <= 1.6 * (1.0 + eps);
    }
    ok &= c(MitigationKind::BnP1).area == 1.14
        && c(MitigationKind::BnP2).area == 1.18
        && c(MitigationKind::BnP3).area == 1.18;
    verdict(
        "cost-model ratios",
        ok,
        format!(
            "TMR/base latency {:.15}, energy {:.15}; BnP latency {:.15}, energy {:.15}; area {} / {} / {}",
            tmr.latency / base.latency,
            tmr.energy / base.energy,
            c(MitigationKind::BnP3).latency / base.latency,
            c(MitigationKind::BnP3).energy / base.energy,
            c(MitigationKind::BnP1).area,
            c(MitigationKind::BnP2).area,
            c(MitigationKind::BnP3).area
        ),
    )
}

fn column_accumulation() -> Verdict {
    let mut r = rng::seeded(41);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let density: f64 = r.random();
        let spikes: Vec<bool> = (0..784).map(|_| r.random::<f64>() < density).collect();
        let column: Vec<u8> = (0..784).map(|_| r.random()).collect();
        let kind = MitigationKind::ALL[r.random_range(0..MitigationKind::ALL.len())];
        let th: u8 = r.random();
        let def = r.random_range(0..=th);
        let policy = MitigationPolicy::custom(kind, th, def).unwrap();
        let mut oracle = 0u32;
        for i in 0..784 {
            if spikes[i] {
                let w = column[i];
                oracle += u32::from(if kind.is_bnp() && w >= th { def } else { w });
            }
        }
        mismatches += usize::from(column_accumulate_raw(&spikes, &column, &policy).unwrap() != oracle);
    }
    verdict(
        "column accumulation equivalence",
        mismatches == 0,
        format!("10^4 triples, {mismatches} mismatches"),
    )
}

struct Mnist {
    cfg: ExperimentConfig,
    model: TrainedModel,
    test: Dataset,
    train_secs: f64,
}

fn mnist() -> Result<Mnist, String> {
    let cfg = common::desk_config();
    let (train, test) = load_subsets(&cfg).map_err(|e| {
        format!(
            "MNIST not available under {} ({e}); run scripts/fetch_mnist.sh or set SNN_DATA_DIR",
            cfg.data_dir.display()
        )
    })?;
    let start = Instant::now();
    let model = prepare_model(&cfg, &train).map_err(|e| e.to_string())?;
    Ok(Mnist {
        cfg,
        model,
        test,
        train_secs: start.elapsed().as_secs_f64(),
    })
}

fn identity_without_faults(m: &Mnist) -> Verdict {
    let inputs = encode_test_set(&m.test, &m.cfg).unwrap();
    let cfg = m.cfg.engine_config();
    let empty = FaultMap::empty(m.model.dims());
    let run = |kind| {
        let policy = MitigationPolicy::from_stats(kind, &m.model.stats);
        let mut e = Engine::prepare(&m.model, &empty, &policy, &cfg).unwrap();
        inputs.iter().map(|x| e.infer(x).unwrap().spike_counts).collect::<Vec<_>>()
    };
    let reference = run(MitigationKind::NoMitigation);
    let wgh_max = m.model.stats.wgh_max;
    let max_lines: Vec<bool> = (0..m.model.dims().rows)
        .map(|r| m.model.weights.row(r).contains(&wgh_max))
        .collect();
    let drives_max = |x: &SpikeTrain| (0..x.duration()).any(|t| x.active(t).iter().any(|&i| max_lines[i as usize]));
    let mut pass = true;
    let mut details = Vec::new();
    for kind in BNP {
        let counts = run(kind);
        let differing: Vec<usize> = (0..inputs.len()).filter(|&k| counts[k] != reference[k]).collect();
        let explained = differing.iter().all(|&k| drives_max(&inputs[k]));
        // BnP2 replaces wgh_max by itself and must be exact; BnP1 and BnP3
        // may differ only where an input drives a weight equal to wgh_max
        pass &= match kind {
            MitigationKind::BnP2 => differing.is_empty(),
            _ => explained,
        };
        details.push(format!("{kind} differs on {}/{}", differing.len(), inputs.len()));
    }
    let max_weights = m.model.weights.codes().iter().filter(|&&c| c == wgh_max).count();
    verdict(
        "identity without faults",
        pass,
        format!(
            "{}; wgh_max {wgh_max} held by {max_weights} synapses, all differences on inputs driving one",
            details.join(", ")
        ),
    )
}

fn directional(m: &Mnist) -> (Verdict, Verdict, Verdict) {
    let mut cfg = m.cfg.clone();
    cfg.fault_rates = vec![0.0, 0.1];
    cfg.num_fault_maps = 10;
    cfg.policies = vec![
        MitigationKind::NoMitigation,
        MitigationKind::BnP1,
        MitigationKind::BnP2,
        MitigationKind::BnP3,
    ];
    let start = Instant::now();
    let result = run_sweep_with_model(&m.model, &m.test, &cfg).unwrap();
    let secs = start.elapsed().as_secs_f64() + m.train_secs;
    let acc = |k, r| 100.0 * result.mean_accuracy(k, r).unwrap();
    let clean = acc(MitigationKind::NoMitigation, 0.0);
    let none = acc(MitigationKind::NoMitigation, 0.1);
    let [b1, b2, b3] = BNP.map(|k| acc(k, 0.1));
    let directional = verdict(
        "directional accuracy at rate 0.1",
        b3 - none >= 10.0 && clean - b3 <= 5.0 && secs <= 600.0,
        format!(
            "clean {clean:.2}%, no mitigation {none:.2}%, BnP3 {b3:.2}% (+{:.2} over no mitigation, {:.2} below clean), {secs:.0} s",
            b3 - none,
            clean - b3
        ),
    );
    let ordering = verdict(
        "BnP2 ordering at rate 0.1",
        b2 <= b1.max(b3) + 1.0,
        format!("BnP1 {b1:.2}%, BnP2 {b2:.2}%, BnP3 {b3:.2}% over 10 maps"),
    );
    let areas: Vec<(MitigationKind, f64)> = BNP
        .iter()
        .map(|&k| (k, result.rows.iter().find(|r| r.policy == k).unwrap().area_norm))
        .collect();
    let echoed = verdict(
        "area constants in sweep reports",
        areas == [(MitigationKind::BnP1, 1.14), (MitigationKind::BnP2, 1.18), (MitigationKind::BnP3, 1.18)],
        format!("{areas:?}"),
    );
    (directional, ordering, echoed)
}

fn determinism(m: &Mnist) -> Verdict {
    let mut cfg = m.cfg.clone();
    cfg.train_subset = 1000;
    cfg.test_subset = 200;
    cfg.fault_rates = vec![0.0, 0.1];
    cfg.num_fault_maps = 2;
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for (i, workers) in [1, 2].into_iter().enumerate() {
        cfg.workers = workers;
        let path = dir.path().join(format!("run{i}.csv"));
        snn_fault_sim::harness::write_csv(&run_sweep(&cfg).unwrap(), &path).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    verdict(
        "determinism of the full pipeline",
        bytes[0] == bytes[1],
        format!(
            "train+sweep twice (1 and 2 workers, 1000/200 images, seed {}): {} vs {} bytes, identical: {}",
            cfg.master_seed,
            bytes[0].len(),
            bytes[1].len(),
            bytes[0] == bytes[1]
        ),
    )
}

#[test]
fn acceptance() {
    let mut verdicts = vec![
        bounding_oracle(),
        fault_rate_statistics(),
        burst_protection(),
        cost_ratios(),
        column_accumulation(),
    ];
    match mnist() {
        Ok(m) => {
            verdicts.push(identity_without_faults(&m));
            let (directional, ordering, echoed) = directional(&m);
            verdicts.push(directional);
            verdicts.push(ordering);
            verdicts[3].pass &= echoed.pass;
            verdicts[3].detail += &format!("; sweep rows {}", echoed.detail);
            verdicts.push(determinism(&m));
        }
        Err(e) => {
            for name in [
                "identity without faults",
                "directional accuracy at rate 0.1",
                "BnP2 ordering at rate 0.1",
                "determinism of the full pipeline",
            ] {
                verdicts.push(verdict(name, false, e.clone()));
            }
        }
    }
    println!();
    for v in &verdicts {
        println!("[{}] {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    let failed: Vec<&str> = verdicts.iter().filter(|v| !v.pass).map(|v| v.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
