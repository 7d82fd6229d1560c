use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{c, Real, C};

/// The crate-wide generator: ChaCha8, fully determined by a 64-bit seed.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic vector with entries uniform in the unit square, not normalized.
pub(crate) fn random_amplitudes<T: Real>(dim: usize, seed: u64) -> Vec<C<T>> {
    let mut rng = seeded(seed);
    (0..dim)
        .map(|_| {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            c(T::lit(a), T::lit(b))
        })
        .collect()
}

/// SplitMix64 finalizer; used to derive per-task seeds from a base seed.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
