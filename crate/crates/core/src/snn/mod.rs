//! Single-layer LIF network: neuron dynamics, input encoding, STDP training
//! and the unsupervised readout.

pub mod dataset;
pub mod encoding;
pub mod lif;
pub mod model;
pub mod readout;
pub mod stdp;
pub mod weights;

pub use dataset::Dataset;
pub use encoding::{encode_poisson, SpikeTrain};
pub use lif::{LifNeuronState, LifParams, OpMask, StepOutcome};
pub use model::TrainedModel;
pub use readout::{classify, NeuronLabelAssignment};
pub use stdp::{label_neurons, stdp_train, StdpConfig, TrainingConfig};
pub use weights::{dequantize, quantize, CleanModelStats, QuantizedWeightMatrix};
