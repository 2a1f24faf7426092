//! Exact arithmetic kernels: arbitrary-precision rationals, Gaussian
//! rationals, and formal sums of square roots of squarefree integers.
//!
//! Everything downstream (the quadric model, the coloring pipeline, the
//! obstruction scanner) runs on these types; floating point appears only
//! in test oracles.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub mod factor;
mod radical;
mod scalar;

pub use radical::{radical_from_square, radical_signed_sum, Radical};
pub use scalar::Scalar;

/// The exact rational coordinate type.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("factorization budget exceeded")]
    FactorizationBudgetExceeded,
    #[error("expected a positive value")]
    NotPositive,
    #[error("malformed rational string: {0:?}")]
    BadRational(String),
    #[error("malformed scalar string: {0:?}")]
    BadScalar(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Serialize a rational as `"p/q"`, omitting `/q` when the denominator is 1.
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Write `q > 0` as `coeff^2 * core` with `core` squarefree, so that
/// `sqrt(q) = coeff * sqrt(core)`.
pub fn squarefree_decompose(q: &Rat) -> Result<(Rat, BigUint), ExactError> {
    if !q.is_positive() {
        return Err(ExactError::NotPositive);
    }
    let a = q.numer().magnitude().clone();
    let b = q.denom().magnitude().clone();
    // sqrt(a/b) = sqrt(a*b)/b
    let n = &a * &b;
    let factors = factor::factor(&n)?;
    let mut core = BigUint::one();
    let mut sq = BigUint::one();
    for (p, e) in factors {
        if e % 2 == 1 {
            core *= &p;
        }
        sq *= p.pow(e / 2);
    }
    let coeff = Rat::new(BigInt::from(sq), BigInt::from(b));
    Ok((coeff, core))
}
