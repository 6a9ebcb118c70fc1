//! Fault-map file format (JSON, one location per line).
//!
//! ```text
//! {
//!   "format": "snn-fault-map",
//!   "version": 1,
//!   "rows": 784,
//!   "cols": 100,
//!   "fault_rate": 0.01,
//!   "seed": 42,
//!   "stream": 0,
//!   "synapse_flips": [
//!     [0, 17, 3],
//!     [0, 52, 7]
//!   ],
//!   "neuron_faults": [
//!     [12, "vmem_reset"]
//!   ]
//! }
//! ```
//!
//! `synapse_flips` entries are `[row, col, bit]` in ascending order;
//! `neuron_faults` entries are `[neuron, kind]` in ascending neuron order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::Value;

use super::{BitFlip, Dims, FaultMap, NeuronFaultKind, WEIGHT_BITS};
use crate::{Error, Result};

pub const FAULT_MAP_FORMAT: &str = "snn-fault-map";
pub const FAULT_MAP_VERSION: u64 = 1;

const DOC: &str = "fault map";

pub fn serialize_fault_map(map: &FaultMap) -> Vec<u8> {
    let mut s = String::new();
    let rate = serde_json::to_string(&map.fault_rate).expect("finite rate");
    let _ = write!(
        s,
        "{{\n  \"format\": \"{FAULT_MAP_FORMAT}\",\n  \"version\": {FAULT_MAP_VERSION},\n  \"rows\": {},\n  \"cols\": {},\n  \"fault_rate\": {rate},\n  \"seed\": {},\n  \"stream\": {},\n",
        map.dims.rows, map.dims.cols, map.seed, map.stream
    );
    write_list(
        &mut s,
        "synapse_flips",
        map.synapse_flips
            .iter()
            .map(|f| format!("[{}, {}, {}]", f.row, f.col, f.bit)),
    );
    s.push_str(",\n");
    write_list(
        &mut s,
        "neuron_faults",
        map.neuron_faults
            .iter()
            .map(|(col, kind)| format!("[{col}, \"{}\"]", kind.name())),
    );
    s.push_str("\n}\n");
    s.into_bytes()
}

fn write_list(s: &mut String, key: &str, items: impl Iterator<Item = String>) {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        let _ = write!(s, "  \"{key}\": []");
        return;
    }
    let _ = write!(s, "  \"{key}\": [\n    {}\n  ]", items.join(",\n    "));
}

fn err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format {
        document: DOC,
        field: field.into(),
        message: message.into(),
    }
}

fn field<'a>(doc: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| err(key, "missing"))
}

fn uint(doc: &serde_json::Map<String, Value>, key: &str) -> Result<u64> {
    field(doc, key)?
        .as_u64()
        .ok_or_else(|| err(key, "expected a non-negative integer"))
}

pub fn deserialize_fault_map(bytes: &[u8]) -> Result<FaultMap> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| {
        let what = if e.is_eof() { "truncated document" } else { "malformed document" };
        err("<document>", format!("{what}: {e}"))
    })?;
    let doc = value
        .as_object()
        .ok_or_else(|| err("<document>", "top level is not an object"))?;

    match field(doc, "format")?.as_str() {
        Some(FAULT_MAP_FORMAT) => {}
        _ => return Err(err("format", format!("expected \"{FAULT_MAP_FORMAT}\""))),
    }
    let version = uint(doc, "version")?;
    if version != FAULT_MAP_VERSION {
        return Err(err(
            "version",
            format!("unsupported version {version}, this build reads version {FAULT_MAP_VERSION}"),
        ));
    }
    let rows = uint(doc, "rows")? as usize;
    let cols = uint(doc, "cols")? as usize;
    if rows == 0 || cols == 0 {
        return Err(err(if rows == 0 { "rows" } else { "cols" }, "must be positive"));
    }
    let fault_rate = field(doc, "fault_rate")?
        .as_f64()
        .filter(|r| (0.0..=1.0).contains(r))
        .ok_or_else(|| err("fault_rate", "expected a number in [0, 1]"))?;
    let seed = uint(doc, "seed")?;
    let stream = uint(doc, "stream")?;

    let flips_val = field(doc, "synapse_flips")?
        .as_array()
        .ok_or_else(|| err("synapse_flips", "expected an array"))?;
    let mut synapse_flips = Vec::with_capacity(flips_val.len());
    for (i, entry) in flips_val.iter().enumerate() {
        let name = || format!("synapse_flips[{i}]");
        let triple = entry
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| err(name(), "expected [row, col, bit]"))?;
        let nums: Vec<u64> = triple
            .iter()
            .map(|v| v.as_u64().ok_or_else(|| err(name(), "expected integers")))
            .collect::<Result<_>>()?;
        if nums[0] as usize >= rows || nums[1] as usize >= cols || nums[2] >= u64::from(WEIGHT_BITS) {
            return Err(err(name(), format!("location {nums:?} outside {rows}x{cols}x8")));
        }
        let flip = BitFlip {
            row: nums[0] as u32,
            col: nums[1] as u32,
            bit: nums[2] as u8,
        };
        if synapse_flips.last().is_some_and(|prev| *prev >= flip) {
            return Err(err(name(), "entries must be strictly ascending"));
        }
        synapse_flips.push(flip);
    }

    let faults_val = field(doc, "neuron_faults")?
        .as_array()
        .ok_or_else(|| err("neuron_faults", "expected an array"))?;
    let mut neuron_faults = BTreeMap::new();
    for (i, entry) in faults_val.iter().enumerate() {
        let name = || format!("neuron_faults[{i}]");
        let pair = entry
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| err(name(), "expected [neuron, kind]"))?;
        let col = pair[0]
            .as_u64()
            .filter(|&c| (c as usize) < cols)
            .ok_or_else(|| err(name(), format!("neuron index must be below {cols}")))? as usize;
        let kind: NeuronFaultKind = serde_json::from_value(pair[1].clone())
            .map_err(|_| err(name(), format!("unknown fault kind {}", pair[1])))?;
        if neuron_faults.insert(col, kind).is_some() {
            return Err(err(name(), format!("neuron {col} listed twice")));
        }
    }

    Ok(FaultMap {
        dims: Dims::new(rows, cols),
        fault_rate,
        seed,
        stream,
        synapse_flips,
        neuron_faults,
    })
}
