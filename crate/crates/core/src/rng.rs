//! Seed derivation and per-stream generators.
//!
//! Every random draw in the crate comes from a ChaCha8 stream whose 64-bit
//! seed is derived from a master seed and a path of stream labels (for
//! example `(seed, color)` or `(master, r, sample)`). Labels are folded in
//! with the SplitMix64 finalizer, so streams for different labels are
//! statistically independent and the mapping is fixed across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and a sequence of labels.
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(splitmix64(seed), |acc, &label| splitmix64(acc.rotate_left(23) ^ splitmix64(label)))
}

/// The generator for the stream at `labels` under `seed`.
pub fn stream(seed: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, labels))
}
