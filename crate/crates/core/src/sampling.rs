//! Seeded random rationals shared by the randomized checks and probes.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::exactmath::Rational;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `p/q` with `|p| <= height` and `1 <= q <= height`.
pub fn rational(rng: &mut impl Rng, height: i64) -> Rational {
    let height = height.max(1);
    let p = rng.gen_range(-height..=height);
    let q = rng.gen_range(1..=height);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Like [`rational`] but never zero.
pub fn nonzero_rational(rng: &mut impl Rng, height: i64) -> Rational {
    loop {
        let r = rational(rng, height);
        if r != Rational::from_integer(BigInt::from(0)) {
            return r;
        }
    }
}
