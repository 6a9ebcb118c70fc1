//! 8-bit synaptic weight registers and clean-model statistics.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Crossbar contents: `rows` inputs × `cols` neurons of 8-bit weight codes,
/// stored row-major so that one input line's weights are contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedWeightMatrix {
    rows: usize,
    cols: usize,
    codes: Vec<u8>,
    scale: f64,
}

/// Linear quantizer: `code = round_half_up(w / scale)` clamped to `0..=255`.
pub fn quantize(weight: f64, scale: f64) -> u8 {
    let q = (weight / scale + 0.5).floor();
    q.clamp(0.0, 255.0) as u8
}

pub fn dequantize(code: u8, scale: f64) -> f64 {
    f64::from(code) * scale
}

impl QuantizedWeightMatrix {
    pub fn new(rows: usize, cols: usize, codes: Vec<u8>, scale: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("weight matrix dimensions must be positive"));
        }
        if codes.len() != rows * cols {
            return Err(Error::invalid(format!(
                "weight matrix {rows}x{cols} needs {} codes, got {}",
                rows * cols,
                codes.len()
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid("weight scale must be positive and finite"));
        }
        Ok(Self {
            rows,
            cols,
            codes,
            scale,
        })
    }

    pub fn zeros(rows: usize, cols: usize, scale: f64) -> Result<Self> {
        Self::new(rows, cols, vec![0; rows * cols], scale)
    }

    /// Quantizes a row-major real-valued matrix with `scale = w_limit / 255`.
    pub fn from_real(rows: usize, cols: usize, weights: &[f64], w_limit: f64) -> Result<Self> {
        let scale = w_limit / 255.0;
        let codes = weights.iter().map(|&w| quantize(w, scale)).collect();
        Self::new(rows, cols, codes, scale)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.codes[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, code: u8) {
        self.codes[row * self.cols + col] = code;
    }

    /// Weights of input line `row` across all neurons.
    pub fn row(&self, row: usize) -> &[u8] {
        &self.codes[row * self.cols..(row + 1) * self.cols]
    }

    /// Weights feeding neuron `col`, top to bottom.
    pub fn column(&self, col: usize) -> impl Iterator<Item = u8> + '_ {
        self.codes.iter().skip(col).step_by(self.cols).copied()
    }

    pub fn dequantized(&self) -> Vec<f64> {
        self.codes.iter().map(|&c| dequantize(c, self.scale)).collect()
    }

    /// Same dimensions and scale, codes rewritten by `f`.
    pub fn map_codes(&self, f: impl Fn(u8) -> u8) -> Self {
        Self {
            codes: self.codes.iter().map(|&c| f(c)).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn codes_mut(&mut self) -> &mut [u8] {
        &mut self.codes
    }
}

/// Statistics of the fault-free trained weights used to parameterize weight bounding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanModelStats {
    pub wgh_max: u8,
    pub wgh_hp: u8,
    /// Count of weights per code, 256 entries.
    pub histogram: Vec<u64>,
}

/// Width in codes of one bin of the coarse histogram used to pick `wgh_hp`.
pub const HP_BIN_WIDTH: usize = 16;

impl CleanModelStats {
    /// `wgh_hp` is the centre code of the most populated 16-code bin when
    /// only nonzero weights are counted (lowest bin wins ties), capped at
    /// `wgh_max`. A matrix with no nonzero weight gets `wgh_hp = 0`.
    pub fn from_weights(weights: &QuantizedWeightMatrix) -> Self {
        let mut histogram = vec![0u64; 256];
        for &c in weights.codes() {
            histogram[usize::from(c)] += 1;
        }
        let wgh_max = weights.codes().iter().copied().max().unwrap_or(0);

        let mut coarse = [0u64; 256 / HP_BIN_WIDTH];
        for (code, &n) in histogram.iter().enumerate().skip(1) {
            coarse[code / HP_BIN_WIDTH] += n;
        }
        let best = coarse
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .fold(None::<(usize, u64)>, |acc, (bin, &n)| match acc {
                Some((_, m)) if m >= n => acc,
                _ => Some((bin, n)),
            });
        let wgh_hp = match best {
            Some((bin, _)) => {
                let centre = bin * HP_BIN_WIDTH + HP_BIN_WIDTH / 2;
                (centre.min(usize::from(wgh_max))) as u8
            }
            None => 0,
        };
        Self {
            wgh_max,
            wgh_hp,
            histogram,
        }
    }
}
