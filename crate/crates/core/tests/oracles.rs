//! Brute-force oracles for bounding, accumulation, quantization and encoding.

use std::time::Instant;

use rand::Rng;
use snn_fault_sim::engine::{accumulate_active, bound_weight, column_accumulate, column_accumulate_raw, MitigationKind, MitigationPolicy};
use snn_fault_sim::rng;
use snn_fault_sim::snn::{dequantize, encode_poisson, quantize};

const BNP: [MitigationKind; 3] = [MitigationKind::BnP1, MitigationKind::BnP2, MitigationKind::BnP3];

fn def_for(kind: MitigationKind, th: u8) -> u8 {
    match kind {
        MitigationKind::BnP1 => 0,
        MitigationKind::BnP2 => th,
        _ => th / 2,
    }
}

#[test]
fn bounding_matches_conditional_exhaustively() {
    let start = Instant::now();
    let mut mismatches = 0;
    for kind in BNP {
        for th in 0..=255u8 {
            let def = def_for(kind, th);
            let policy = MitigationPolicy::custom(kind, th, def).unwrap();
            for w in 0..=255u8 {
                let expected = if w >= th { def } else { w };
                mismatches += usize::from(bound_weight(w, &policy) != expected);
            }
        }
    }
    assert_eq!(mismatches, 0);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn unbounded_policies_pass_weights_through() {
    for kind in [MitigationKind::NoMitigation, MitigationKind::ReExecutionTMR] {
        let policy = MitigationPolicy::custom(kind, 10, 0).unwrap();
        for w in 0..=255u8 {
            assert_eq!(bound_weight(w, &policy), w);
        }
    }
}

fn random_policy(r: &mut impl Rng) -> MitigationPolicy {
    let kind = MitigationKind::ALL[r.random_range(0..MitigationKind::ALL.len())];
    let th: u8 = r.random();
    MitigationPolicy::custom(kind, th, def_for(kind, th)).unwrap()
}

fn scalar_sum(spikes: &[bool], column: &[u8], policy: &MitigationPolicy) -> u32 {
    let mut sum = 0u32;
    for i in 0..spikes.len() {
        if spikes[i] {
            let w = column[i];
            let b = if policy.kind.is_bnp() && w >= policy.wgh_th { policy.wgh_def } else { w };
            sum += u32::from(b);
        }
    }
    sum
}

#[test]
fn column_accumulation_matches_scalar_oracle() {
    let mut r = rng::seeded(11);
    for _ in 0..10_000 {
        let density: f64 = r.random();
        let spikes: Vec<bool> = (0..784).map(|_| r.random::<f64>() < density).collect();
        let column: Vec<u8> = (0..784).map(|_| r.random()).collect();
        let policy = random_policy(&mut r);
        let expected = scalar_sum(&spikes, &column, &policy);
        assert_eq!(column_accumulate_raw(&spikes, &column, &policy).unwrap(), expected);
        let scaled = column_accumulate(&spikes, &column, &policy, 0.5).unwrap();
        assert_eq!(scaled, f64::from(expected) * 0.5);
    }
}

#[test]
fn row_accumulation_matches_scalar_oracle() {
    let mut r = rng::seeded(12);
    let (rows, cols) = (64, 9);
    for _ in 0..2_000 {
        let policy = random_policy(&mut r);
        let weights: Vec<u8> = (0..rows * cols).map(|_| r.random()).collect();
        let bounded: Vec<u8> = weights.iter().map(|&w| bound_weight(w, &policy)).collect();
        let spikes: Vec<bool> = (0..rows).map(|_| r.random_bool(0.3)).collect();
        let active: Vec<u32> = (0..rows as u32).filter(|&i| spikes[i as usize]).collect();
        let mut acc = vec![0u32; cols];
        accumulate_active(&active, &bounded, cols, &policy, &mut acc);
        for c in 0..cols {
            let column: Vec<u8> = (0..rows).map(|i| weights[i * cols + c]).collect();
            assert_eq!(acc[c], scalar_sum(&spikes, &column, &policy));
        }
    }
}

#[test]
fn accumulation_rejects_length_mismatch() {
    let policy = MitigationPolicy::no_mitigation();
    assert!(column_accumulate_raw(&[true; 3], &[1, 2], &policy).is_err());
}

#[test]
fn quantization_round_trips_every_code() {
    for scale in [1.0 / 255.0, 4.0 / 255.0, 0.013] {
        for code in 0..=255u8 {
            assert_eq!(quantize(dequantize(code, scale), scale), code);
        }
    }
}

/// Counts of one line over 10^4 independent trains follow Binomial(20, p).
#[test]
fn poisson_counts_pass_chi_square() {
    const TRIALS: usize = 10_000;
    const DURATION: usize = 20;
    // bins 0..=9 and a merged >= 10 bin: 10 degrees of freedom, alpha = 0.01
    const CRITICAL: f64 = 23.209251158954356;
    let p = 200.0 / 255.0 * 0.25;
    let mut observed = [0usize; 11];
    for seed in 0..TRIALS as u64 {
        let train = encode_poisson(&[200], DURATION, 0.25, seed).unwrap();
        observed[train.spike_count(0).min(10)] += 1;
    }
    let pmf = |k: usize| {
        let mut c = 1.0;
        for i in 0..k {
            c *= (DURATION - i) as f64 / (i + 1) as f64;
        }
        c * f64::powi(p, k as i32) * f64::powi(1.0 - p, (DURATION - k) as i32)
    };
    let mut expected: Vec<f64> = (0..10).map(|k| TRIALS as f64 * pmf(k)).collect();
    expected.push(TRIALS as f64 - expected.iter().sum::<f64>());
    let chi2: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    assert!(chi2 < CRITICAL, "chi-square {chi2} >= {CRITICAL}");
}

#[test]
fn encoding_is_seeded() {
    let img: Vec<u8> = (0..=255).collect();
    let a = encode_poisson(&img, 50, 0.25, 3).unwrap();
    assert_eq!(a, encode_poisson(&img, 50, 0.25, 3).unwrap());
    assert_ne!(a, encode_poisson(&img, 50, 0.25, 4).unwrap());
}
