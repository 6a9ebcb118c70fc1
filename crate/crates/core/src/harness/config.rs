//! Experiment configuration: one TOML file per experiment, with dotted
//! `key=value` overrides applied on top.
//!
//! ```toml
//! workload = "mnist"
//! data_dir = "data/mnist"
//! network_size = 100
//! train_subset = 5000
//! test_subset = 1000
//! fault_rates = [0.0, 0.01, 0.05, 0.1]
//! num_fault_maps = 10
//! policies = ["no_mitigation", "bnp1", "bnp2", "bnp3", "tmr"]
//! master_seed = 2022
//! workers = 1
//!
//! [encoding]
//! duration = 100
//! max_rate = 0.25
//!
//! [training]  # epochs, min_output_spikes, rate_boost, max_boosts
//! [lif]       # LifParams
//! [stdp]      # StdpConfig
//! [engine]    # crossbar_rows, crossbar_cols, reset_fault_detect_cycles
//! [cost]      # CostParams
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::engine::{EngineConfig, MitigationKind};
use crate::snn::{LifParams, StdpConfig, TrainingConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Workload {
    Mnist,
    FashionMnist,
}

impl Workload {
    pub fn name(self) -> &'static str {
        match self {
            Workload::Mnist => "mnist",
            Workload::FashionMnist => "fashion_mnist",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingConfig {
    /// Timesteps per input presentation.
    pub duration: usize,
    pub max_rate: f64,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            duration: 100,
            max_rate: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub epochs: usize,
    pub min_output_spikes: u32,
    pub rate_boost: f64,
    pub max_boosts: u32,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let t = TrainingConfig::default();
        Self {
            epochs: t.epochs,
            min_output_spikes: t.min_output_spikes,
            rate_boost: t.rate_boost,
            max_boosts: t.max_boosts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub crossbar_rows: usize,
    pub crossbar_cols: usize,
    pub reset_fault_detect_cycles: u32,
}

impl Default for EngineSection {
    fn default() -> Self {
        let e = EngineConfig::default();
        Self {
            crossbar_rows: e.crossbar_rows,
            crossbar_cols: e.crossbar_cols,
            reset_fault_detect_cycles: e.reset_fault_detect_cycles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub workload: Workload,
    /// Directory holding the four IDX files; relative paths resolve against
    /// the config file's directory.
    pub data_dir: PathBuf,
    pub network_size: usize,
    pub train_subset: usize,
    pub test_subset: usize,
    pub fault_rates: Vec<f64>,
    pub num_fault_maps: usize,
    pub policies: Vec<MitigationKind>,
    pub master_seed: u64,
    /// Sweep cells evaluated concurrently.
    pub workers: usize,
    /// Trained model to load instead of training one.
    pub model: Option<PathBuf>,
    pub encoding: EncodingConfig,
    pub training: TrainingSection,
    pub lif: LifParams,
    pub stdp: StdpConfig,
    pub engine: EngineSection,
    pub cost: CostParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            workload: Workload::Mnist,
            data_dir: PathBuf::from("data/mnist"),
            network_size: 100,
            train_subset: 5000,
            test_subset: 1000,
            fault_rates: vec![0.0, 0.01, 0.05, 0.1],
            num_fault_maps: 10,
            policies: MitigationKind::ALL.to_vec(),
            master_seed: 2022,
            workers: 1,
            model: None,
            encoding: EncodingConfig::default(),
            training: TrainingSection::default(),
            lif: LifParams::default(),
            stdp: StdpConfig::default(),
            engine: EngineSection::default(),
            cost: CostParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text`, then applies `key=value` overrides (dotted keys reach
    /// into sections, values use TOML syntax and fall back to bare strings).
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for ov in overrides {
            apply_override(&mut table, ov)?;
        }
        let cfg: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `data_dir` or `model` is taken
    /// relative to the file's directory.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_with_overrides(&text, overrides)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if cfg.data_dir.is_relative() {
            cfg.data_dir = base.join(&cfg.data_dir);
        }
        if let Some(m) = cfg.model.as_mut().filter(|m| m.is_relative()) {
            *m = base.join(&*m);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if let Some(r) = self.fault_rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return bad(format!("fault rate {r} outside [0, 1]"));
        }
        if self.fault_rates.is_empty() || self.policies.is_empty() {
            return bad("fault_rates and policies must be nonempty".into());
        }
        if self.num_fault_maps == 0 {
            return bad("num_fault_maps must be at least 1".into());
        }
        if self.network_size == 0 || self.test_subset == 0 || self.train_subset == 0 {
            return bad("network_size, train_subset and test_subset must be positive".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        self.training_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.engine_config().validate()
    }

    pub fn training_config(&self) -> TrainingConfig {
        TrainingConfig {
            network_size: self.network_size,
            epochs: self.training.epochs,
            duration: self.encoding.duration,
            max_rate: self.encoding.max_rate,
            min_output_spikes: self.training.min_output_spikes,
            rate_boost: self.training.rate_boost,
            max_boosts: self.training.max_boosts,
            lif: self.lif,
            stdp: self.stdp,
        }
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            crossbar_rows: self.engine.crossbar_rows,
            crossbar_cols: self.engine.crossbar_cols,
            reset_fault_detect_cycles: self.engine.reset_fault_detect_cycles,
            cost: self.cost,
        }
    }
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{item}` is not KEY=VALUE")))?;
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let mut parts: Vec<&str> = key.trim().split('.').collect();
    let last = parts.pop().filter(|k| !k.is_empty()).ok_or_else(|| Error::Config(format!("empty key in `{item}`")))?;
    let mut cur = table;
    for part in parts {
        cur = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{part}` in `{key}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}
