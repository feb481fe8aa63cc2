//! Real primitive Dirichlet characters given by fundamental discriminants,
//! and their values L(−n, χ).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{BigRational, ExactError};
use crate::cache::WriteOnceCache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The character n ↦ (d/n) for a fundamental discriminant d ≠ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharacterSpec {
    discriminant: i64,
}

fn squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub(crate) fn is_fundamental(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && squarefree(m.unsigned_abs());
    }
    false
}

impl CharacterSpec {
    pub fn new(d: i64) -> Result<Self, ExactError> {
        if d == 1 {
            return Err(ExactError::Principal);
        }
        if !is_fundamental(d) {
            return Err(ExactError::NotFundamental(d));
        }
        Ok(Self { discriminant: d })
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn modulus(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    pub fn parity(&self) -> Parity {
        if self.discriminant > 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn value(&self, n: u64) -> i32 {
        kronecker(self.discriminant, n)
    }
}

fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol (d/n) for n ≥ 0.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1;
    while n.is_multiple_of(2) {
        if d % 2 == 0 {
            return 0;
        }
        n /= 2;
        if matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

fn l_cache() -> &'static WriteOnceCache<(i64, usize), BigRational> {
    static CACHE: OnceLock<WriteOnceCache<(i64, usize), BigRational>> = OnceLock::new();
    CACHE.get_or_init(WriteOnceCache::new)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// B_{n,χ} for n = 0..=order via Σ_a χ(a) t e^{at}/(e^{ft} − 1), dividing
/// power series exactly after cancelling the common factor t.
fn generalized_bernoulli(chi: &CharacterSpec, order: usize) -> Vec<BigRational> {
    let f = chi.modulus();
    let fact: Vec<BigRational> = (0..=order + 1)
        .map(|j| BigRational::from_integer(factorial(j)))
        .collect();
    let numer: Vec<BigRational> = (0..=order)
        .map(|j| {
            let s: BigInt = (1..=f)
                .map(|a| BigInt::from(chi.value(a)) * num_traits::pow(BigInt::from(a), j))
                .sum();
            BigRational::from_integer(s) / &fact[j]
        })
        .collect();
    let denom: Vec<BigRational> = (0..=order)
        .map(|j| BigRational::from_integer(num_traits::pow(BigInt::from(f), j + 1)) / &fact[j + 1])
        .collect();
    let mut quot: Vec<BigRational> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = numer[j].clone();
        for i in 0..j {
            acc -= &quot[i] * &denom[j - i];
        }
        quot.push(acc / &denom[0]);
    }
    quot.into_iter()
        .enumerate()
        .map(|(m, c)| c * &fact[m])
        .collect()
}

/// L(−n, χ) = −B_{n+1,χ}/(n+1), memoized per (d, n).
pub fn l_chi_neg(chi: &CharacterSpec, n: usize) -> BigRational {
    let value = l_cache().get_or_insert_with((chi.discriminant, n), || {
        let b = generalized_bernoulli(chi, n + 1);
        -b[n + 1].clone() / BigRational::from_integer(BigInt::from(n + 1))
    });
    (*value).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::exact::{hurwitz_neg, rat};

    const SAMPLE: [i64; 7] = [-8, -4, -3, 5, 8, 12, 13];

    #[test]
    fn fundamental_discriminants() {
        for d in SAMPLE {
            assert!(CharacterSpec::new(d).is_ok(), "{d}");
        }
        for d in [0, 2, 3, 4, 7, 9, -16, 16, -48, 20, 25] {
            assert!(CharacterSpec::new(d).is_err(), "{d}");
        }
        assert_eq!(CharacterSpec::new(1), Err(ExactError::Principal));
        assert_eq!(CharacterSpec::new(7), Err(ExactError::NotFundamental(7)));
        assert_eq!(CharacterSpec::new(-4).unwrap().parity(), Parity::Odd);
        assert_eq!(CharacterSpec::new(5).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 3), -1);
        let table: Vec<i32> = (1..=8).map(|n| kronecker(-4, n)).collect();
        assert_eq!(table, vec![1, 0, -1, 0, 1, 0, -1, 0]);
        for d in SAMPLE {
            assert_eq!(kronecker(d, 1), 1);
        }
        assert_eq!(kronecker(5, 5), 0);
        // Legendre symbol mod 5: squares are 1, 4.
        let t5: Vec<i32> = (1..=5).map(|n| kronecker(5, n)).collect();
        assert_eq!(t5, vec![1, -1, -1, 1, 0]);
        // χ_{-3}: 1, -1, 0.
        let t3: Vec<i32> = (1..=3).map(|n| kronecker(-3, n)).collect();
        assert_eq!(t3, vec![1, -1, 0]);
        // χ_8: ±1 mod 8 → 1, ±3 mod 8 → −1.
        let t8: Vec<i32> = (1..=8).map(|n| kronecker(8, n)).collect();
        assert_eq!(t8, vec![1, 0, -1, 0, -1, 0, 1, 0]);
    }

    #[test]
    fn kronecker_periodic_and_multiplicative() {
        for d in SAMPLE {
            let f = d.unsigned_abs();
            for n in 1..=3 * f {
                assert_eq!(kronecker(d, n), kronecker(d, n + f), "period d={d} n={n}");
                for m in 1..=3 * f {
                    assert_eq!(
                        kronecker(d, n * m),
                        kronecker(d, n) * kronecker(d, m),
                        "mult d={d} n={n} m={m}"
                    );
                }
            }
            // parity: χ(f − 1) = χ(−1) = sign(d)
            let expect = if d > 0 { 1 } else { -1 };
            assert_eq!(kronecker(d, f - 1), expect);
        }
    }

    #[test]
    fn l_values_examples() {
        let chi4 = CharacterSpec::new(-4).unwrap();
        assert_eq!(l_chi_neg(&chi4, 0), rat(1, 2));
        assert_eq!(l_chi_neg(&chi4, 2), rat(-1, 2));
        // L(−2n, χ_{−4}) = E_{2n}/2 with E_4 = 5, E_6 = −61.
        assert_eq!(l_chi_neg(&chi4, 4), rat(5, 2));
        assert_eq!(l_chi_neg(&chi4, 6), rat(-61, 2));
        let chi5 = CharacterSpec::new(5).unwrap();
        assert!(l_chi_neg(&chi5, 0).is_zero());
        assert_eq!(l_chi_neg(&chi5, 1), rat(-2, 5));
    }

    #[test]
    fn l_values_match_hurwitz_route() {
        // L(−n, χ) = f^n Σ_{a=1}^{f} χ(a) ζ(−n, a/f).
        for d in SAMPLE {
            let chi = CharacterSpec::new(d).unwrap();
            let f = chi.modulus() as i64;
            for n in 0..=9 {
                let mut s = BigRational::zero();
                for a in 1..=f {
                    let c = chi.value(a as u64);
                    if c != 0 {
                        let h = hurwitz_neg(n, &rat(a, f)).unwrap();
                        s += h * BigRational::from_integer(c.into());
                    }
                }
                s *= BigRational::from_integer(num_traits::pow(BigInt::from(f), n));
                assert_eq!(l_chi_neg(&chi, n), s, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn parity_vanishing() {
        for d in SAMPLE {
            let chi = CharacterSpec::new(d).unwrap();
            for n in 0..=6 {
                match chi.parity() {
                    Parity::Even => assert!(l_chi_neg(&chi, 2 * n).is_zero(), "d={d} n={n}"),
                    Parity::Odd => assert!(l_chi_neg(&chi, 2 * n + 1).is_zero(), "d={d} n={n}"),
                }
            }
        }
    }
}
