//! Full experiment: train, sweep fault rates and maps, write CSV and charts.
//!
//! cargo run --release --example sweep_report -- [CONFIG] [OUT_DIR] [KEY=VALUE...]
//!
//! CONFIG defaults to `configs/desk_scale.toml`, OUT_DIR to `out/report`.
//! Trailing arguments override config keys, e.g. `num_fault_maps=2`.

use std::path::PathBuf;

use snn_fault_sim::harness::{emit_report, run_sweep, ExperimentConfig, ReportFormat};

fn main() -> snn_fault_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map_or_else(|| PathBuf::from("configs/desk_scale.toml"), PathBuf::from);
    let out = args.next().map_or_else(|| PathBuf::from("out/report"), PathBuf::from);
    let overrides: Vec<String> = args.collect();
    let cfg = ExperimentConfig::load(&config, &overrides)?;
    let started = std::time::Instant::now();
    let result = run_sweep(&cfg)?;
    println!("{} rows in {:.1?}", result.rows.len(), started.elapsed());
    for policy in result.policies() {
        let cells: Vec<String> = result
            .rates()
            .iter()
            .map(|&r| format!("{r}: {:5.2}%", 100.0 * result.mean_accuracy(policy, r).unwrap_or(f64::NAN)))
            .collect();
        println!("{:<14} {}", policy.name(), cells.join("  "));
    }
    for format in [ReportFormat::Csv, ReportFormat::Svg] {
        for path in emit_report(&result, format, &out)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
