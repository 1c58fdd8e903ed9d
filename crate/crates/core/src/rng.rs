//! Deterministic random substreams.
//!
//! Every consumer of randomness (a population generator, a split, a
//! bootstrap replicate, a Monte Carlo replication) gets its own ChaCha
//! stream keyed by a master seed and a stream id. Results then do not
//! depend on the order in which work items are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids are namespaced by a tag so that, e.g., replicate 3 of a
/// bootstrap and population 3 of a generator never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamTag {
    Split = 1,
    Bootstrap = 2,
    Diseased = 3,
    Healthy = 4,
    Replication = 5,
}

pub fn substream(seed: u64, tag: StreamTag, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((tag as u64) << 56) ^ index);
    rng
}

/// Derive a child seed, used where a whole sub-computation needs its own
/// master seed (e.g. the test run inside one Monte Carlo replication).
pub fn derive_seed(seed: u64, tag: StreamTag, index: u64) -> u64 {
    use rand::RngCore;
    substream(seed, tag, index).next_u64()
}
