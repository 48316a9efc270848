//! Seeds, environment overrides and random parameter values.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{AcmError, Result};
use crate::scalar::{is_prime, DEFAULT_PRIME};

pub const SEED_VAR: &str = "ACM_SEED";
pub const PRIME_VAR: &str = "ACM_PRIME";
pub const DEFAULT_SEED: u64 = 20140;

/// Upper bound for numerators and denominators of random parameters.
pub const RANDOM_RATIONAL_BOUND: i64 = 10_000;

/// Seed from `ACM_SEED` if set, else `fallback`.
pub fn seed_or(fallback: u64) -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| AcmError::Parse(format!("{SEED_VAR} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(fallback),
    }
}

/// Prime from `ACM_PRIME` if set, else the default.
pub fn default_prime() -> Result<u64> {
    match std::env::var(PRIME_VAR) {
        Ok(s) => {
            let p: u64 = s
                .trim()
                .parse()
                .map_err(|_| AcmError::Parse(format!("{PRIME_VAR} must be an integer, got `{s}`")))?;
            if !is_prime(p) {
                return Err(AcmError::NotPrime(p));
            }
            Ok(p)
        }
        Err(_) => Ok(DEFAULT_PRIME),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p, q` uniform in `[1, RANDOM_RATIONAL_BOUND]`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p = rng.gen_range(1..=RANDOM_RATIONAL_BOUND);
    let q = rng.gen_range(1..=RANDOM_RATIONAL_BOUND);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random positive rational avoiding `bad`.
pub fn random_rational_avoiding(rng: &mut ChaCha8Rng, bad: impl Fn(&BigRational) -> bool) -> BigRational {
    loop {
        let a = random_rational(rng);
        if !bad(&a) {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let a: Vec<BigRational> = {
            let mut r = rng(7);
            (0..5).map(|_| random_rational(&mut r)).collect()
        };
        let mut r = rng(7);
        let b: Vec<BigRational> = (0..5).map(|_| random_rational(&mut r)).collect();
        assert_eq!(a, b);
    }
}
