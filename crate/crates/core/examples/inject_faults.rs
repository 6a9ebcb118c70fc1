//! Samples fault maps, writes one to disk and reads it back.
//!
//! cargo run --example inject_faults -- [RATE] [SEED]

use snn_fault_sim::fault::{
    apply_bit_flips, deserialize_fault_map, generate_fault_map, serialize_fault_map, Dims, NeuronFaultKind,
};
use snn_fault_sim::snn::QuantizedWeightMatrix;

fn main() -> snn_fault_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let rate: f64 = args.next().map_or(Ok(0.01), |a| a.parse()).expect("RATE is a number");
    let seed: u64 = args.next().map_or(Ok(1), |a| a.parse()).expect("SEED is an integer");
    let dims = Dims::new(784, 100);

    let map = generate_fault_map(dims, rate, seed)?;
    println!(
        "{dims} crossbar at rate {rate}: {} of {} register bits flipped (expected {:.1})",
        map.synapse_flips.len(),
        dims.synapse_bit_locations(),
        dims.synapse_bit_locations() as f64 * rate
    );
    println!("{} faulty neurons (expected {:.1})", map.neuron_faults.len(), dims.cols as f64 * rate);
    for kind in NeuronFaultKind::ALL {
        println!("  {:<17} {} neurons", kind.name(), map.count_kind(kind));
    }

    // maps from one seed are nested: raising the rate only adds faults
    let higher = generate_fault_map(dims, (rate * 10.0).min(1.0), seed)?;
    let kept = map
        .synapse_flips
        .iter()
        .filter(|f| higher.synapse_flips.binary_search(f).is_ok())
        .count();
    println!("{kept}/{} flips reappear at rate {}", map.synapse_flips.len(), higher.fault_rate);

    let path = std::env::temp_dir().join(format!("fault_map_{seed}.json"));
    std::fs::write(&path, serialize_fault_map(&map)).map_err(|e| snn_fault_sim::Error::io(&path, e))?;
    let back = deserialize_fault_map(&std::fs::read(&path).map_err(|e| snn_fault_sim::Error::io(&path, e))?)?;
    assert_eq!(back, map);
    println!("round-tripped through {}", path.display());

    let weights = QuantizedWeightMatrix::zeros(dims.rows, dims.cols, 1.0 / 255.0)?;
    let faulty = apply_bit_flips(&weights, &map)?;
    let raised = faulty.codes().iter().filter(|&&c| c >= 128).count();
    println!("on an all-zero weight matrix, {raised} registers now read >= 128");
    Ok(())
}
