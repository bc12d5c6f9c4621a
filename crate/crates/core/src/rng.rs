//! Seeded randomness.
//!
//! Every stochastic routine draws from [`ChaCha8Rng`] seeded with a 64-bit
//! value. Independent streams (one per generated graph, tree, fold or
//! restart) get their seed from [`derive_seed`], which mixes the master seed,
//! a stream tag and an index with SplitMix64 finalizers. Because seeds never
//! depend on execution order, parallel runs match serial ones exactly.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream tags keep seeds for different purposes apart even when the master
/// seed and index coincide.
pub mod stream {
    pub const GRAPH: u64 = 0x0067_7261_7068;
    pub const CORPUS_PARAMS: u64 = 0x0070_6172_616d;
    pub const TREE: u64 = 0x7472_6565;
    pub const FOLD: u64 = 0x666f_6c64;
    pub const KMEANS: u64 = 0x6b6d_6561_6e73;
    pub const CV_FOREST: u64 = 0x0063_7666_6f72;
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for item `index` of stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
