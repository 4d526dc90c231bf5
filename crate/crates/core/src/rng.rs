//! Seeded, counter-addressed random streams.
//!
//! Every unit of work (a path, a trial) draws from its own ChaCha8 stream
//! keyed by `(seed, domain)` and selected by its index, so results do not
//! depend on scheduling or thread count. Normal variates come from
//! `rand_distr::StandardNormal` (ziggurat) applied to that stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as StreamRng;

pub fn stream_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Stable 64-bit tag for a label (FNV-1a), used as a stream domain.
pub fn domain(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
