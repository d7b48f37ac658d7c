//! Seeded random streams.
//!
//! Every stochastic component draws from a ChaCha8 stream derived from an
//! experiment seed plus a tag path, so results do not depend on the order in
//! which independent components happen to be constructed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tags for the top-level consumers.
pub mod tag {
    pub const SCENARIO: u64 = 1;
    pub const MOBILITY: u64 = 2;
    pub const CHANNEL: u64 = 3;
    pub const TRAFFIC: u64 = 4;
    pub const POLICY: u64 = 5;
    pub const INIT: u64 = 6;
    pub const SHUFFLE: u64 = 7;
}

/// Derives a child seed from `seed` and a path of tags.
pub fn derive(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(seed, |acc, &t| {
        let mut r = ChaCha8Rng::seed_from_u64(acc);
        r.set_stream(t);
        r.next_u64()
    })
}

/// A ChaCha8 stream for `seed` under the given tag path.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tags))
}
