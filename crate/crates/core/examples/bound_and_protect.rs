//! Weight bounding on a faulty column and reset-fault protection on a neuron.
//!
//! cargo run --example bound_and_protect

use snn_fault_sim::engine::{
    bound_weight, column_accumulate_raw, detect_and_protect, MitigationKind, MitigationPolicy,
};
use snn_fault_sim::fault::NeuronFaultKind;
use snn_fault_sim::snn::{CleanModelStats, LifNeuronState, LifParams, QuantizedWeightMatrix};

fn main() -> snn_fault_sim::Result<()> {
    // a clean column whose weights cluster at low codes
    let clean: Vec<u8> = vec![3, 5, 8, 12, 0, 9, 60, 7, 4, 11, 2, 6];
    let stats = CleanModelStats::from_weights(&QuantizedWeightMatrix::new(clean.len(), 1, clean.clone(), 1.0 / 255.0)?);
    println!("clean column {clean:?}: wgh_max {}, wgh_hp {}", stats.wgh_max, stats.wgh_hp);

    // the same column after flips of bit 7 in two registers and bit 0 in one
    let mut faulty = clean.clone();
    faulty[1] ^= 0x80;
    faulty[4] ^= 0x80;
    faulty[9] ^= 0x01;
    let spikes = vec![true; clean.len()];
    println!("faulty column {faulty:?}");
    // a clean weight equal to wgh_max is also replaced, so even the clean sums change
    for kind in MitigationKind::ALL.into_iter().filter(|k| *k != MitigationKind::ReExecutionTMR) {
        let policy = MitigationPolicy::from_stats(kind, &stats);
        let seen: Vec<u8> = faulty.iter().map(|&w| bound_weight(w, &policy)).collect();
        println!(
            "  {:<14} sum {:>4} (clean {:>3})  weights {seen:?}",
            kind.name(),
            column_accumulate_raw(&spikes, &faulty, &policy)?,
            column_accumulate_raw(&spikes, &clean, &policy)?
        );
    }

    let params = LifParams {
        v_threshold: 10.0,
        leak_amount: 1.0,
        t_refractory: 2,
        theta_plus: 0.0,
        ..LifParams::default()
    };
    for protect in [false, true] {
        let mut neuron = LifNeuronState::at_rest(&params);
        neuron.begin_presentation(&params, Some(NeuronFaultKind::VmemReset));
        let mut train = String::new();
        for _ in 0..40 {
            let out = neuron.step(&params, 4.0, 0.0);
            if protect {
                detect_and_protect(&mut neuron, out, 2);
            }
            train.push(if out.spiked { '|' } else { '.' });
        }
        println!("reset-faulty neuron, protection {:<5} {train}", protect);
    }
    Ok(())
}
