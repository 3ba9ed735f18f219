//! Seeded random streams.
//!
//! Every replicate draws from its own ChaCha stream selected by
//! `(seed, stream)`, so a replicate's output does not depend on which
//! thread ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream tags keep unrelated consumers of one seed from sharing a stream.
pub(crate) mod tag {
    pub const LINE: u64 = 1;
    pub const SHUFFLE: u64 = 2;
    pub const CASCADE: u64 = 3;
    pub const RANDOM_POOL: u64 = 4;
    pub const GRAPH_GEN: u64 = 5;
}

/// Generator for replicate `index` of the stream family `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Packs a tag and two counters into a stream index.
pub(crate) fn stream_id(tag: u64, major: u64, minor: u64) -> u64 {
    debug_assert!(major < (1 << 24) && minor < (1 << 32));
    (tag << 56) | (major << 32) | minor
}
