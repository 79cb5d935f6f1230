//! Counter-keyed random streams.
//!
//! Every random draw in the crate comes from a generator keyed by the run
//! seed plus a path of counters (Monte Carlo replication, bootstrap
//! replication, resampling level). Work items can therefore run on any
//! thread in any order and still reproduce the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream labels for the last path component.
pub mod level {
    pub const PATH: u64 = 0;
    pub const FIRST: u64 = 1;
    pub const SECOND: u64 = 2;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a counter path into a single 64-bit key.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(seed), |acc, &x| {
        splitmix64(acc ^ splitmix64(x.wrapping_add(0xD6E8_FEB8_6659_FD93)))
    })
}

pub fn substream(seed: u64, path: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}
