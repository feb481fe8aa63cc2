//! Bernoulli numbers and polynomials, and the ζ / Hurwitz ζ values at
//! non-positive integers built from them.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{binomial, rat, BigRational, ExactError};

fn table() -> &'static RwLock<Vec<BigRational>> {
    static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

/// Akiyama–Tanigawa: produces B_0..=B_n with the B_1 = +1/2 convention.
fn akiyama_tanigawa(n: usize) -> Vec<BigRational> {
    let mut row: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(rat(1, m as i64 + 1));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(row[0].clone());
    }
    out
}

/// Bernoulli number B_n with B_1 = −1/2.
pub fn bernoulli(n: usize) -> BigRational {
    {
        let t = table().read().unwrap();
        if n < t.len() {
            return t[n].clone();
        }
    }
    let mut t = table().write().unwrap();
    if n >= t.len() {
        let target = n.max(2 * t.len()).max(16);
        let mut values = akiyama_tanigawa(target);
        values[1] = -values[1].clone();
        // Entries already published stay untouched.
        let start = t.len();
        t.extend(values.into_iter().skip(start));
    }
    t[n].clone()
}

/// B_n(x) = Σ_k C(n,k) B_k x^{n−k}.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    // Horner in x over descending powers: coefficient of x^{n-k} is C(n,k) B_k.
    let mut acc = BigRational::zero();
    for k in 0..=n {
        let c = BigRational::from_integer(binomial(n as u64, k as u64)) * bernoulli(k);
        acc = acc * x + c;
    }
    acc
}

/// ζ(−n). ζ(0) = −1/2 is returned directly; otherwise −B_{n+1}/(n+1).
pub fn zeta_neg(n: usize) -> BigRational {
    if n == 0 {
        return rat(-1, 2);
    }
    -bernoulli(n + 1) / BigRational::from_integer(BigInt::from(n + 1))
}

/// Hurwitz ζ(−n, x) = −B_{n+1}(x)/(n+1) for 0 < x ≤ 1.
pub fn hurwitz_neg(n: usize, x: &BigRational) -> Result<BigRational, ExactError> {
    if !x.is_positive() || *x > BigRational::one() {
        return Err(ExactError::HurwitzDomain(x.clone()));
    }
    Ok(-bernoulli_poly(n + 1, x) / BigRational::from_integer(BigInt::from(n + 1)))
}

/// L_{l,m}(−2n) = (2l)^{2n} (ζ(−2n, m/2l) − ζ(−2n, (l+m)/2l)).
pub fn lm_value(l: i64, m: i64, n: usize) -> Result<BigRational, ExactError> {
    if m <= 0 || m >= l {
        return Err(ExactError::LmParams { l, m });
    }
    let a = rat(m, 2 * l);
    let b = rat(l + m, 2 * l);
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(2 * l), 2 * n));
    Ok(scale * (hurwitz_neg(2 * n, &a)? - hurwitz_neg(2 * n, &b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Σ_{k=0}^{n} C(n+1,k) B_k = 0 for n ≥ 1, solved for B_n.
    fn bernoulli_by_recurrence(n: usize) -> Vec<BigRational> {
        let mut b = vec![BigRational::one()];
        for m in 1..=n {
            let mut s = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                s += BigRational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
    }

    #[test]
    fn b12_matches_recurrence() {
        let oracle = bernoulli_by_recurrence(12);
        // Frozen from the recurrence oracle.
        assert_eq!(oracle[12], rat(-691, 2730));
        assert_eq!(bernoulli(12), oracle[12]);
    }

    #[test]
    fn table_agrees_with_recurrence_to_60() {
        let oracle = bernoulli_by_recurrence(60);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(n), b, "B_{n}");
        }
    }

    #[test]
    fn bernoulli_poly_examples() {
        assert_eq!(bernoulli_poly(1, &rat(1, 4)), rat(-1, 4));
        assert_eq!(bernoulli_poly(2, &rat(1, 2)), rat(-1, 12));
        for n in 0..10 {
            assert_eq!(bernoulli_poly(n, &BigRational::zero()), bernoulli(n));
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(0), rat(-1, 2));
        assert_eq!(zeta_neg(1), rat(-1, 12));
        assert_eq!(zeta_neg(2), rat(0, 1));
        assert_eq!(zeta_neg(3), rat(1, 120));
        for n in 1..=10 {
            assert!(zeta_neg(2 * n).is_zero());
        }
    }

    #[test]
    fn hurwitz_examples() {
        assert_eq!(hurwitz_neg(0, &rat(1, 3)).unwrap(), rat(1, 6));
        assert_eq!(hurwitz_neg(1, &rat(1, 2)).unwrap(), rat(1, 24));
        for n in 0..8 {
            assert_eq!(hurwitz_neg(n, &rat(1, 1)).unwrap(), zeta_neg(n));
        }
        assert!(matches!(
            hurwitz_neg(1, &rat(0, 1)),
            Err(ExactError::HurwitzDomain(_))
        ));
        assert!(hurwitz_neg(1, &rat(3, 2)).is_err());
    }

    /// Brute-force B_{n}(x) from the explicit power-sum form
    /// B_n(x) = Σ_{k} 1/(k+1) Σ_j (−1)^j C(k,j) (x+j)^n.
    fn bernoulli_poly_brute(n: usize, x: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for k in 0..=n {
            let mut inner = BigRational::zero();
            for j in 0..=k {
                let term = BigRational::from_integer(binomial(k as u64, j as u64))
                    * num_traits::pow(x + BigRational::from_integer(BigInt::from(j)), n);
                if j % 2 == 0 {
                    inner += term;
                } else {
                    inner -= term;
                }
            }
            total += inner / BigRational::from_integer(BigInt::from(k + 1));
        }
        total
    }

    #[test]
    fn hurwitz_against_power_sum_oracle() {
        for two_l in 2..=12i64 {
            for num in 1..=two_l {
                let x = rat(num, two_l);
                for n in 0..=8 {
                    let oracle = -bernoulli_poly_brute(n + 1, &x)
                        / BigRational::from_integer(BigInt::from(n + 1));
                    assert_eq!(hurwitz_neg(n, &x).unwrap(), oracle, "n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn lm_examples() {
        assert_eq!(lm_value(2, 1, 0).unwrap(), rat(1, 2));
        assert_eq!(lm_value(3, 1, 0).unwrap(), rat(1, 2));
        assert_eq!(lm_value(7, 3, 0).unwrap(), rat(1, 2));
        // 16·(−B_3(1/4) + B_3(3/4))/3 with B_3(1/4) = 3/64, B_3(3/4) = −3/64.
        assert_eq!(lm_value(2, 1, 1).unwrap(), rat(-1, 2));
        assert!(lm_value(3, 3, 1).is_err());
        assert!(lm_value(3, 0, 1).is_err());
    }

    #[test]
    fn lm_against_alternating_sum_oracle() {
        // L_{3,1}(−2n) from the periodic coefficients of Σ(−1)^j (3j+1)^{−s}:
        // period 12 with a(1)=1, a(4)=−1, a(7)=1, a(10)=−1, so
        // L(−2n) = 12^{2n} Σ_a a(a) ζ(−2n, a/12).
        for n in 0..6 {
            let mut s = BigRational::zero();
            for (a, sign) in [(1, 1), (4, -1), (7, 1), (10, -1)] {
                let h = hurwitz_neg(2 * n, &rat(a, 12)).unwrap();
                s += if sign > 0 { h } else { -h };
            }
            s *= BigRational::from_integer(num_traits::pow(BigInt::from(12), 2 * n));
            assert_eq!(lm_value(3, 1, n).unwrap(), s);
        }
        assert_eq!(lm_value(3, 1, 1).unwrap(), rat(-1, 1));
        assert_eq!(lm_value(3, 1, 2).unwrap(), rat(11, 1));
        assert_eq!(lm_value(3, 1, 3).unwrap(), rat(-301, 1));
    }
}
