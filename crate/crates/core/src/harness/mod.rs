//! Experiment plumbing: dataset files, configuration, sweeps and reports.

pub mod config;
pub mod idx;
pub mod report;
pub mod sweep;

pub use config::{ExperimentConfig, Workload};
pub use idx::{load_idx, load_split, Split};
pub use report::{emit_report, parse_csv, read_csv, write_csv, ReportFormat};
pub use sweep::{
    encode_test_set, evaluate, load_subsets, prepare_model, run_sweep, run_sweep_with_model, SweepResult,
    SweepRow,
};
