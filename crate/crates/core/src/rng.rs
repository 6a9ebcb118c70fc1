//! Seeded random streams.
//!
//! Every stochastic operation draws from [`SimRng`], which is ChaCha8 keyed
//! by a 64-bit seed. Independent sub-experiments use distinct ChaCha stream
//! ids of the same key, so the numbers a given (seed, stream) pair produces
//! never depend on how many other streams were consumed or on thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for `seed` positioned at the start of stream 0.
pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Generator for `seed` positioned at the start of stream `stream`.
pub fn substream(seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed from a parent seed and a (domain, index) pair.
///
/// SplitMix64 finalizer over the mixed inputs; used to hand out the
/// training, encoding and fault-map seeds of an experiment from one master
/// seed.
pub fn derive_seed(parent: u64, domain: u64, index: u64) -> u64 {
    let mut z = parent
        ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed domains used by the experiment pipeline.
pub mod domain {
    pub const TRAINING: u64 = 1;
    pub const TEST_ENCODING: u64 = 2;
    pub const FAULT_MAP: u64 = 3;
    pub const LABELING: u64 = 4;
}
