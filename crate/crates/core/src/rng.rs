//! Seeded random streams.
//!
//! Every Monte-Carlo loop in the crate (permutations, trials, trees) draws
//! from its own ChaCha stream selected by `(seed, index)`. ChaCha is counter
//! based, so stream `i` does not depend on how many numbers other streams
//! consumed and results are identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for substream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derive a child seed so nested loops get disjoint stream families.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
