//! Per-macro random streams.
//!
//! Every macro gets its own ChaCha8 stream keyed by a hash of the global seed
//! and its position in the hierarchy, so results do not depend on which
//! worker runs which cluster or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type MacroRng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a global seed with a cluster path into one 64-bit stream key.
pub fn stream_key(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Stream for the cluster `cluster` at hierarchy level `level`.
pub fn macro_rng(seed: u64, level: usize, cluster: usize) -> MacroRng {
    ChaCha8Rng::seed_from_u64(stream_key(seed, &[level as u64, cluster as u64]))
}
