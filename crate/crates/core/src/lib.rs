//! Behavioral simulator of a spiking-neural-network accelerator compute
//! engine under soft errors.
//!
//! The crate models a single-layer, fully connected LIF network with direct
//! lateral inhibition that is trained with STDP and then executed on a
//! 256×256 synapse crossbar with 8-bit weight registers. Soft errors are
//! injected as bit flips in the weight registers and as faulty neuron
//! operations. Three bound-and-protect mitigations (weight bounding plus
//! reset-fault neuron protection) and a triple re-execution baseline are
//! simulated, and a parametric cost model reports latency, energy and area.
//!
//! Module map:
//!
//! - [`snn`]: LIF dynamics, Poisson encoding, STDP training, readout and the
//!   trained-model container.
//! - [`fault`]: fault-map generation, bit-flip application and the fault-map
//!   file format.
//! - [`engine`]: weight bounding, column accumulation, neuron fault semantics,
//!   reset-fault protection, inference and re-execution with voting.
//! - [`cost`]: latency / energy / area accounting.
//! - [`harness`]: IDX datasets, experiment configuration, sweeps and reports.

pub mod cost;
pub mod engine;
pub mod error;
pub mod fault;
pub mod harness;
pub mod rng;
pub mod snn;

pub use error::{Error, Result};
