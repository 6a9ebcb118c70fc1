//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or configuration errors, 2 when a
//! run fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use snn_fault_sim::engine::{Engine, MitigationKind, MitigationPolicy};
use snn_fault_sim::fault::{deserialize_fault_map, generate_fault_map, serialize_fault_map, Dims, FaultMap};
use snn_fault_sim::harness::{
    emit_report, encode_test_set, evaluate, load_subsets, prepare_model, read_csv, run_sweep_with_model, write_csv,
    ExperimentConfig, ReportFormat,
};
use snn_fault_sim::snn::TrainedModel;
use snn_fault_sim::{Error, Result};

#[derive(Parser)]
#[command(name = "snnfi", version, about = "Soft-error simulation for SNN accelerators")]
struct Cli {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides master_seed (or the map seed for `inject`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Config override, `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the clean model and save it.
    Train,
    /// Sample a fault map and write it as JSON.
    Inject {
        #[arg(long)]
        rate: f64,
        /// Crossbar extent, ROWSxCOLS; defaults to the configured network.
        #[arg(long)]
        dims: Option<Dims>,
    },
    /// Evaluate the test subset under one fault map and policy.
    Run {
        #[arg(long, default_value = "no_mitigation")]
        policy: MitigationKind,
        /// Fault map file; without it a map is sampled at `--rate`.
        #[arg(long)]
        fault_map: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
    },
    /// Evaluate every configured policy, rate and fault map; writes CSV.
    Sweep,
    /// Render SVG charts and CSV from a sweep CSV.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

enum Failure {
    Usage(Error),
    Run(Error),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path, &cli.overrides)?,
        None => ExperimentConfig::from_toml_with_overrides("", &cli.overrides)?,
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli).map_err(Failure::Usage)?;
    match &cli.command {
        Command::Inject { rate, .. } | Command::Run { rate, .. } if !(0.0..=1.0).contains(rate) => {
            return Err(Failure::Usage(Error::invalid(format!("--rate {rate} outside [0, 1]"))));
        }
        _ => {}
    }
    let out = cli.out.clone();
    match cli.command {
        Command::Train => train(&cfg, out),
        Command::Inject { rate, dims } => inject(&cfg, cli.seed, rate, dims, out),
        Command::Run { policy, fault_map, rate } => run(&cfg, policy, fault_map, rate),
        Command::Sweep => sweep(&cfg, out),
        Command::Report { input } => report(&input, out),
    }
    .map_err(Failure::Run)
}

fn out_or(out: Option<PathBuf>, default: &str) -> PathBuf {
    out.unwrap_or_else(|| PathBuf::from(default))
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(dir) => std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        None => Ok(()),
    }
}

fn train(cfg: &ExperimentConfig, out: Option<PathBuf>) -> Result<()> {
    let (train, test) = load_subsets(cfg)?;
    let mut cfg = cfg.clone();
    cfg.model = None;
    let model = prepare_model(&cfg, &train)?;
    let path = out_or(out, "out/model.json");
    ensure_parent(&path)?;
    model.save(&path)?;
    let accuracy = clean_accuracy(&model, &test, &cfg)?;
    println!(
        "model {} written to {}; clean accuracy {:.2}% on {} test images; wgh_max {} wgh_hp {}",
        model.dims(),
        path.display(),
        accuracy * 100.0,
        test.len(),
        model.stats.wgh_max,
        model.stats.wgh_hp
    );
    Ok(())
}

fn clean_accuracy(model: &TrainedModel, test: &snn_fault_sim::snn::Dataset, cfg: &ExperimentConfig) -> Result<f64> {
    let inputs = encode_test_set(test, cfg)?;
    let mut engine = Engine::prepare(
        model,
        &FaultMap::empty(model.dims()),
        &MitigationPolicy::no_mitigation(),
        &cfg.engine_config(),
    )?;
    Ok(evaluate(&mut engine, &inputs, &test.labels)?.0)
}

fn inject(cfg: &ExperimentConfig, seed: Option<u64>, rate: f64, dims: Option<Dims>, out: Option<PathBuf>) -> Result<()> {
    let dims = dims.unwrap_or(Dims::new(784, cfg.network_size));
    let map = generate_fault_map(dims, rate, seed.unwrap_or(cfg.master_seed))?;
    let text = serialize_fault_map(&map);
    match out {
        Some(path) => {
            ensure_parent(&path)?;
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            eprintln!(
                "{} synapse bit flips, {} neuron faults written to {}",
                map.synapse_flips.len(),
                map.neuron_faults.len(),
                path.display()
            );
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&text).map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(())
}

fn run(cfg: &ExperimentConfig, policy: MitigationKind, fault_map: Option<PathBuf>, rate: f64) -> Result<()> {
    let (train, test) = load_subsets(cfg)?;
    let model = prepare_model(cfg, &train)?;
    if policy == MitigationKind::ReExecutionTMR {
        let mut one = cfg.clone();
        one.policies = vec![policy];
        one.fault_rates = vec![rate];
        one.num_fault_maps = 1;
        let row = &run_sweep_with_model(&model, &test, &one)?.rows[0];
        println!(
            "{policy} rate {rate}: accuracy {:.2}%, latency {:.3e} s, energy {:.3e} J, area {:.2}",
            row.accuracy * 100.0,
            row.latency_s,
            row.energy_j,
            row.area_norm
        );
        return Ok(());
    }
    let map = match fault_map {
        Some(path) => {
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            deserialize_fault_map(&bytes)?
        }
        None => generate_fault_map(model.dims(), rate, cfg.master_seed)?,
    };
    let inputs = encode_test_set(&test, cfg)?;
    let mut engine = Engine::prepare(
        &model,
        &map,
        &MitigationPolicy::from_stats(policy, &model.stats),
        &cfg.engine_config(),
    )?;
    let (accuracy, cost) = evaluate(&mut engine, &inputs, &test.labels)?;
    println!(
        "{policy} rate {}: accuracy {:.2}%, latency {:.3e} s, energy {:.3e} J, area {:.2}",
        map.fault_rate,
        accuracy * 100.0,
        cost.latency,
        cost.energy,
        cost.area
    );
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, out: Option<PathBuf>) -> Result<()> {
    let (train, test) = load_subsets(cfg)?;
    let model = prepare_model(cfg, &train)?;
    let result = run_sweep_with_model(&model, &test, cfg)?;
    let path = out_or(out, "out/sweep.csv");
    ensure_parent(&path)?;
    write_csv(&result, &path)?;
    for policy in result.policies() {
        let accs: Vec<String> = result
            .rates()
            .iter()
            .map(|&r| format!("{r}: {:.2}%", 100.0 * result.mean_accuracy(policy, r).unwrap_or(f64::NAN)))
            .collect();
        println!("{policy:>14}  {}", accs.join("  "));
    }
    println!("{} rows written to {}", result.rows.len(), path.display());
    Ok(())
}

fn report(input: &Path, out: Option<PathBuf>) -> Result<()> {
    let result = read_csv(input)?;
    let dir = out_or(out, "out/report");
    let mut files = emit_report(&result, ReportFormat::Svg, &dir)?;
    files.extend(emit_report(&result, ReportFormat::Csv, &dir)?);
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}
