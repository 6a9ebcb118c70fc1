use crate::{Error, Result};

/// Labelled grayscale images, one byte per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub image_rows: usize,
    pub image_cols: usize,
    pub images: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn new(image_rows: usize, image_cols: usize, images: Vec<Vec<u8>>, labels: Vec<u8>) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        let pixels = image_rows * image_cols;
        if let Some(i) = images.iter().position(|img| img.len() != pixels) {
            return Err(Error::invalid(format!("image {i} does not have {pixels} pixels")));
        }
        Ok(Self {
            image_rows,
            image_cols,
            images,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn pixels(&self) -> usize {
        self.image_rows * self.image_cols
    }

    /// One past the largest label.
    pub fn num_classes(&self) -> usize {
        self.labels.iter().map(|&l| usize::from(l) + 1).max().unwrap_or(0)
    }

    /// Number of distinct labels present.
    pub fn distinct_classes(&self) -> usize {
        let mut seen = [false; 256];
        for &l in &self.labels {
            seen[usize::from(l)] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    /// The first `n` samples (or all of them when `n` exceeds the size).
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            image_rows: self.image_rows,
            image_cols: self.image_cols,
            images: self.images[..n].to_vec(),
            labels: self.labels[..n].to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u8)> {
        self.images.iter().map(Vec::as_slice).zip(self.labels.iter().copied())
    }
}
