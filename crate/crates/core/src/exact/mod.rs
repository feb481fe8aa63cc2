//! Exact special values over arbitrary-size rationals.

mod bernoulli;
mod character;

pub use bernoulli::{bernoulli, bernoulli_poly, hurwitz_neg, lm_value, zeta_neg};
pub use character::{kronecker, l_chi_neg, CharacterSpec, Parity};

pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("Hurwitz argument must satisfy 0 < x <= 1, got {0}")]
    HurwitzDomain(BigRational),
    #[error("L_{{l,m}} needs 0 < m < l, got l = {l}, m = {m}")]
    LmParams { l: i64, m: i64 },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant 1 gives the principal character")]
    Principal,
}

pub(crate) fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
