//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a 64-bit
//! value. Child seeds are derived from a parent with [`derive_seed`], which
//! mixes `(parent, stream, index)` through SplitMix64. The rule is fixed so
//! experiment outputs are a pure function of the master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for element `index` of named stream `stream` under `parent`.
pub fn derive_seed(parent: u64, stream: u64, index: u64) -> u64 {
    let a = splitmix64(parent ^ splitmix64(stream.wrapping_mul(GOLDEN)));
    splitmix64(a ^ splitmix64(index.wrapping_add(0xD1B5_4A32_D192_ED03)))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Named streams used by the experiment harness.
pub mod stream {
    pub const SAMPLE: u64 = 1;
    pub const REFERENCE: u64 = 2;
    pub const SUBSAMPLE: u64 = 3;
    pub const NOISE: u64 = 4;
    pub const PUSHFORWARD: u64 = 5;
    pub const VERIFY: u64 = 6;
    pub const EMBED: u64 = 7;
    pub const NORMALIZER: u64 = 8;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_spreads() {
        assert_eq!(derive_seed(7, 1, 2), derive_seed(7, 1, 2));
        assert_ne!(derive_seed(7, 1, 2), derive_seed(7, 1, 3));
        assert_ne!(derive_seed(7, 1, 2), derive_seed(7, 2, 2));
        assert_ne!(derive_seed(7, 1, 2), derive_seed(8, 1, 2));
    }
}
