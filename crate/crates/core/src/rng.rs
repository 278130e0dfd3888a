//! Seed derivation for reproducible, schedule-independent sampling.
//!
//! Every job draws from its own ChaCha20 stream whose seed is a SplitMix64 hash of
//! `(master seed, path...)`, so results do not depend on which worker ran what.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type JobRng = ChaCha20Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with a path of identifiers (repetition, job id, ...).
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &id| splitmix64(acc ^ splitmix64(id.wrapping_add(1))))
}

pub fn rng_for(master: u64, path: &[u64]) -> JobRng {
    ChaCha20Rng::seed_from_u64(derive_seed(master, path))
}
