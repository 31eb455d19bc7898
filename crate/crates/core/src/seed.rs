//! Seed derivation and RNG construction.
//!
//! Every random draw in the crate goes through a [`ChaCha8Rng`] seeded from a
//! `u64`. Substream seeds are derived by mixing a parent seed with a tag, so
//! that independent consumers (per-class draws, per-replicate cells) never
//! share state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` and an integer tag.
pub fn derive(parent: u64, tag: u64) -> u64 {
    mix64(mix64(parent) ^ tag.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Derives a child seed from `parent` and a string tag (FNV-1a of the bytes).
pub fn derive_str(parent: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    derive(parent, h)
}
