//! Behavioral model of the compute engine: synapse crossbar with optional
//! weight bounding, LIF neurons with optional reset-fault protection, and
//! the triple re-execution baseline.

mod accumulate;
mod inference;
mod neuron;
mod policy;
mod tmr;

pub use accumulate::{accumulate_active, column_accumulate, column_accumulate_raw};
pub use inference::{run_inference, Engine, EngineConfig, InferenceOutcome};
pub use neuron::{apply_neuron_fault_semantics, detect_and_protect};
pub use policy::{bound_weight, MitigationKind, MitigationPolicy, TMR_COPIES};
pub use tmr::{majority_vote, run_tmr, TmrEngine, TmrOutcome};
