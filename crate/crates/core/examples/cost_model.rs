//! Latency, energy and area of each mitigation for several network sizes.
//!
//! cargo run --example cost_model

use snn_fault_sim::cost::{estimate_cost, tile_count, CostParams};
use snn_fault_sim::engine::MitigationKind;
use snn_fault_sim::fault::Dims;

fn main() -> snn_fault_sim::Result<()> {
    let params = CostParams::default();
    let crossbar = Dims::new(256, 256);
    let duration = 350;
    println!("{:<6} {:<14} {:>6} {:>12} {:>12} {:>6}", "net", "policy", "tiles", "latency [s]", "energy [J]", "area");
    for neurons in [100, 400, 900] {
        let net = Dims::new(784, neurons);
        let tiles = tile_count(net, crossbar)?;
        for kind in MitigationKind::ALL {
            let c = estimate_cost(kind, net, crossbar, duration, &params)?;
            println!(
                "N{:<5} {:<14} {:>6} {:>12.4e} {:>12.4e} {:>6.2}",
                neurons,
                kind.name(),
                tiles,
                c.latency,
                c.energy,
                c.area
            );
        }
    }
    Ok(())
}
