//! IDX files as distributed for MNIST and Fashion-MNIST.
//!
//! Layout: a big-endian `u32` magic (`0x00000803` for 3-d unsigned-byte
//! image tensors, `0x00000801` for 1-d label vectors), one big-endian `u32`
//! per dimension, then the raw bytes.

use std::path::{Path, PathBuf};

use crate::snn::Dataset;
use crate::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn file_names(self) -> (&'static str, &'static str) {
        match self {
            Split::Train => ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
            Split::Test => ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
        }
    }
}

struct Reader<'a> {
    path: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            offset,
            message: message.into(),
        }
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let end = self.pos + 4;
        let chunk = self.bytes.get(self.pos..end).ok_or_else(|| {
            self.err(
                self.bytes.len(),
                format!("truncated header: need 4 bytes for {what}, {} left", self.bytes.len() - self.pos),
            )
        })?;
        self.pos = end;
        Ok(u32::from_be_bytes(chunk.try_into().expect("4 bytes")))
    }

    fn magic(&mut self, expected: u32) -> Result<()> {
        let magic = self.u32("magic number")?;
        if magic != expected {
            return Err(self.err(0, format!("wrong magic 0x{magic:08x}, expected 0x{expected:08x}")));
        }
        Ok(())
    }

    fn body(&mut self, len: usize) -> Result<&'a [u8]> {
        let expected = self.pos + len;
        if self.bytes.len() != expected {
            return Err(self.err(
                self.bytes.len().min(expected),
                format!("expected {expected} bytes in total, found {}", self.bytes.len()),
            ));
        }
        let body = &self.bytes[self.pos..];
        self.pos = expected;
        Ok(body)
    }
}

/// Parsed image file: `(rows, cols, images)`.
pub fn parse_idx_images(bytes: &[u8], path: &str) -> Result<(usize, usize, Vec<Vec<u8>>)> {
    let mut r = Reader { path, bytes, pos: 0 };
    r.magic(IMAGES_MAGIC)?;
    let count = r.u32("image count")? as usize;
    let rows = r.u32("row count")? as usize;
    let cols = r.u32("column count")? as usize;
    let pixels = rows * cols;
    let body = r.body(count * pixels)?;
    let images = if pixels == 0 {
        vec![Vec::new(); count]
    } else {
        body.chunks_exact(pixels).map(<[u8]>::to_vec).collect()
    };
    Ok((rows, cols, images))
}

pub fn parse_idx_labels(bytes: &[u8], path: &str) -> Result<Vec<u8>> {
    let mut r = Reader { path, bytes, pos: 0 };
    r.magic(LABELS_MAGIC)?;
    let count = r.u32("label count")? as usize;
    Ok(r.body(count)?.to_vec())
}

pub fn encode_idx_images(rows: usize, cols: usize, images: &[Vec<u8>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    for v in [IMAGES_MAGIC, images.len() as u32, rows as u32, cols as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    for img in images {
        out.extend_from_slice(img);
    }
    out
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Loads an image file and its label file and checks that their counts agree.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Dataset> {
    let ip = images_path.display().to_string();
    let lp = labels_path.display().to_string();
    let (rows, cols, images) = parse_idx_images(&read(images_path)?, &ip)?;
    let labels = parse_idx_labels(&read(labels_path)?, &lp)?;
    if images.len() != labels.len() {
        return Err(Error::Parse {
            path: lp,
            offset: 4,
            message: format!("{} labels for {} images in {ip}", labels.len(), images.len()),
        });
    }
    Dataset::new(rows, cols, images, labels)
}

pub fn split_paths(dir: &Path, split: Split) -> (PathBuf, PathBuf) {
    let (i, l) = split.file_names();
    (dir.join(i), dir.join(l))
}

/// Loads the standard file pair of `split` from `dir`.
pub fn load_split(dir: &Path, split: Split) -> Result<Dataset> {
    let (i, l) = split_paths(dir, split);
    load_idx(&i, &l)
}
