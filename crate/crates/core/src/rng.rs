//! Deterministic random-number streams.
//!
//! Every component takes a `u64` seed and derives its own independent stream
//! with [`derived`], so adding or reordering consumers never perturbs the
//! randomness seen by the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// RNG seeded directly from `seed`.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for sub-stream `stream` of `seed`; distinct streams are independent.
pub fn derived(seed: u64, stream: u64) -> ChaCha8Rng {
    seeded(splitmix64(seed ^ splitmix64(stream)))
}

/// Numeric stream ids used across the crate.
pub mod stream {
    pub const FOLDS: u64 = 1;
    pub const LINEAR_SHUFFLE: u64 = 2;
    pub const NEURAL_INIT: u64 = 3;
    pub const NEURAL_SHUFFLE: u64 = 4;
    pub const EMBED_FILL: u64 = 5;
}
