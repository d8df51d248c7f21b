//! Seed derivation for schedule-independent parallel runs.
//!
//! Every graph, pair stream and Monte Carlo estimate gets its own 64-bit
//! seed obtained by hashing a master seed together with a path of indices.
//! The hash is SplitMix64 chained over the path, so a derived seed depends
//! only on `(master, path)` and never on which worker evaluates it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random stream in the crate.
pub type SimRng = ChaCha8Rng;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &step| splitmix64(acc ^ splitmix64(step)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_stable_and_path_sensitive() {
        assert_eq!(derive_seed(7, &[1, 2]), derive_seed(7, &[1, 2]));
        assert_ne!(derive_seed(7, &[1, 2]), derive_seed(7, &[2, 1]));
        assert_ne!(derive_seed(7, &[1]), derive_seed(8, &[1]));
        assert_ne!(derive_seed(7, &[0]), derive_seed(7, &[]));
    }
}
