//! Trained-model container and its file format.
//!
//! The file is a single JSON object:
//!
//! | key | content |
//! |-----|---------|
//! | `format` | `"snn-trained-model"` |
//! | `version` | `1` |
//! | `rows`, `cols` | inputs and neurons |
//! | `scale` | potential units per weight code |
//! | `codes` | `rows * cols` weight codes, row-major (input-major) |
//! | `thetas` | learned adaptive-threshold offset per neuron |
//! | `lif` | neuron parameters used in training |
//! | `stats` | `wgh_max`, `wgh_hp`, 256-entry `histogram` |
//! | `assignment` | `num_classes` and per-neuron `labels` (`null` = unassigned) |
//! | `training_seed` | seed the model was trained from |

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CleanModelStats, LifParams, NeuronLabelAssignment, QuantizedWeightMatrix};
use crate::fault::Dims;
use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "snn-trained-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub weights: QuantizedWeightMatrix,
    pub thetas: Vec<f64>,
    pub lif: LifParams,
    pub stats: CleanModelStats,
    pub assignment: NeuronLabelAssignment,
    pub training_seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    rows: usize,
    cols: usize,
    scale: f64,
    codes: Vec<u8>,
    thetas: Vec<f64>,
    lif: LifParams,
    stats: CleanModelStats,
    assignment: NeuronLabelAssignment,
    training_seed: u64,
}

fn bad(field: &str, message: impl Into<String>) -> Error {
    Error::Format {
        document: "model file",
        field: field.into(),
        message: message.into(),
    }
}

impl TrainedModel {
    pub fn dims(&self) -> Dims {
        Dims::new(self.weights.rows(), self.weights.cols())
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            rows: self.weights.rows(),
            cols: self.weights.cols(),
            scale: self.weights.scale(),
            codes: self.weights.codes().to_vec(),
            thetas: self.thetas.clone(),
            lif: self.lif,
            stats: self.stats.clone(),
            assignment: self.assignment.clone(),
            training_seed: self.training_seed,
        };
        let mut s = serde_json::to_string(&file).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| bad("<document>", e.to_string()))?;
        if file.format != MODEL_FORMAT {
            return Err(bad("format", format!("expected \"{MODEL_FORMAT}\"")));
        }
        if file.version != MODEL_VERSION {
            return Err(bad("version", format!("unsupported version {}", file.version)));
        }
        let weights = QuantizedWeightMatrix::new(file.rows, file.cols, file.codes, file.scale)
            .map_err(|e| bad("codes", e.to_string()))?;
        if file.thetas.len() != file.cols {
            return Err(bad("thetas", format!("expected {} entries", file.cols)));
        }
        if file.assignment.labels.len() != file.cols {
            return Err(bad("assignment", format!("expected {} labels", file.cols)));
        }
        if file.stats.histogram.len() != 256 {
            return Err(bad("stats", "histogram must have 256 bins"));
        }
        file.lif.validate().map_err(|e| bad("lif", e.to_string()))?;
        Ok(Self {
            weights,
            thetas: file.thetas,
            lif: file.lif,
            stats: file.stats,
            assignment: file.assignment,
            training_seed: file.training_seed,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
