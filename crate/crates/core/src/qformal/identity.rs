//! The multi-sum families A, B, C, their theta-function right-hand sides,
//! and coefficient-exact identity checks.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::bailey::seed_beta;
use super::pochhammer::{div_pochhammer, inv_pochhammer, mul_pochhammer};
use super::{Family, LaurentQSeries, QError, QMonomial};
use crate::cache::WriteOnceCache;

/// Largest outer index that can contribute below q^N: the outer weight
/// carries q^{n(n+1)/2}.
pub(crate) fn outer_bound(order: usize) -> usize {
    let two_n = 2 * order;
    let mut s = (two_n as f64).sqrt() as usize;
    while s * s < two_n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= two_n {
        s -= 1;
    }
    s + 1
}

/// (z)_{r+1} (q/z)_r / ((q)_r (q;q²)_{r+1}): the seed β after the (−q)_r
/// cancellation in the S2 chain.
fn c_base(r: usize, order: usize) -> LaurentQSeries {
    let mut s = LaurentQSeries::one(order);
    mul_pochhammer(&mut s, QMonomial::z(0), 1, r + 1);
    mul_pochhammer(&mut s, QMonomial::z_inv(1), 1, r);
    div_pochhammer(&mut s, QMonomial::q(1), 1, r);
    div_pochhammer(&mut s, QMonomial::q(1), 2, r + 1);
    s
}

/// The family's inner multi-sums A_{n,k}, B_{n,k} or C_{n,k} for n ≤ n_max,
/// evaluated one nesting level at a time from the innermost index.
fn inner_sums(family: Family, k: usize, n_max: usize, order: usize) -> Vec<LaurentQSeries> {
    match family {
        Family::A | Family::C => {
            let inv: Vec<LaurentQSeries> = (0..=n_max)
                .map(|m| inv_pochhammer(QMonomial::q(1), 1, m, order))
                .collect();
            let mut level: Vec<LaurentQSeries> = (0..=n_max)
                .map(|r| match family {
                    Family::A => seed_beta(1, r, order),
                    _ => c_base(r, order),
                })
                .collect();
            for _ in 0..k {
                level = (0..=n_max)
                    .map(|n| {
                        let mut acc = LaurentQSeries::zero(order);
                        for r in 0..=n {
                            let e = match family {
                                Family::A => r * r + r,
                                _ => r * (r + 1) / 2,
                            };
                            if e >= order {
                                break;
                            }
                            let w = inv[n - r].mul_monomial(&BigInt::from(1), 0, e);
                            acc.add_assign_ref(&(&w * &level[r]));
                        }
                        acc
                    })
                    .collect();
            }
            level
        }
        Family::B => {
            let mut level: Vec<LaurentQSeries> =
                (0..=n_max).map(|r| seed_beta(1 << k, r, order)).collect();
            for i in (1..=k).rev() {
                let qi = 1usize << (i - 1);
                let inv: Vec<LaurentQSeries> = (0..=n_max)
                    .map(|m| inv_pochhammer(QMonomial::q(2 * qi), 2 * qi, m, order))
                    .collect();
                level = (0..=n_max)
                    .map(|n| {
                        let mut acc = LaurentQSeries::zero(order);
                        for r in 0..=n {
                            let mut w = inv[n - r].mul_monomial(&BigInt::from(1), 0, qi * (n - r));
                            if w.is_zero() {
                                continue;
                            }
                            mul_pochhammer(&mut w, QMonomial::neg_q(2 * qi), qi, 2 * r);
                            acc.add_assign_ref(&(&w * &level[r]));
                        }
                        acc
                    })
                    .collect();
            }
            level
        }
    }
}

/// Outer weight (Q;Q)_n (−1)^n Q^{n(n+1)/2} with Q = q^{base}, divided by
/// (−q;q)_n for family C.
fn outer_weight(family: Family, n: usize, base: usize, order: usize) -> LaurentQSeries {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut w = LaurentQSeries::monomial(sign, 0, base * n * (n + 1) / 2, order);
    mul_pochhammer(&mut w, QMonomial::q(base), base, n);
    if family == Family::C {
        div_pochhammer(&mut w, QMonomial::neg_q(1), 1, n);
    }
    w
}

fn lhs_cache() -> &'static WriteOnceCache<(Family, usize, usize, usize), LaurentQSeries> {
    static CACHE: OnceLock<WriteOnceCache<(Family, usize, usize, usize), LaurentQSeries>> =
        OnceLock::new();
    CACHE.get_or_init(WriteOnceCache::new)
}

fn multisum_with_outer_base(family: Family, k: usize, order: usize, base: usize) -> LaurentQSeries {
    let v = lhs_cache().get_or_insert_with((family, k, order, base), || {
        let n_max = outer_bound(order);
        let inner = inner_sums(family, k, n_max, order);
        let mut total = LaurentQSeries::zero(order);
        for (n, m) in inner.iter().enumerate() {
            let w = outer_weight(family, n, base, order);
            if !w.is_zero() {
                total.add_assign_ref(&(&w * m));
            }
        }
        total
    });
    (*v).clone()
}

/// Σ_n (outer weight) · (family multi-sum) mod q^N, with a = q.
pub fn multisum_lhs(family: Family, k: usize, order: usize) -> LaurentQSeries {
    assert!(k >= 1, "chain depth k must be at least 1");
    multisum_with_outer_base(family, k, order, 1)
}

/// The same sum, built by enumerating every index chain n ≥ r_1 ≥ … ≥ r_k
/// and multiplying out the displayed summand. Slow; used as a cross-check.
pub fn multisum_lhs_brute(family: Family, k: usize, order: usize) -> LaurentQSeries {
    let n_max = outer_bound(order);
    let mut total = LaurentQSeries::zero(order);
    for n in 0..=n_max {
        let mut inner = LaurentQSeries::zero(order);
        let mut rs = vec![0usize; k];
        enumerate(n, 0, &mut rs, &mut |rs| {
            inner.add_assign_ref(&summand(family, n, rs, order));
        });
        total.add_assign_ref(&(&outer_weight(family, n, 1, order) * &inner));
    }
    total
}

fn enumerate(prev: usize, depth: usize, rs: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if depth == rs.len() {
        f(rs);
        return;
    }
    for r in 0..=prev {
        rs[depth] = r;
        enumerate(r, depth + 1, rs, f);
    }
}

fn summand(family: Family, n: usize, rs: &[usize], order: usize) -> LaurentQSeries {
    let k = rs.len();
    let last = rs[k - 1];
    match family {
        Family::A | Family::C => {
            let e: usize = match family {
                Family::A => rs.iter().map(|r| r * r + r).sum(),
                _ => rs.iter().map(|r| r * (r + 1) / 2).sum(),
            };
            let mut s = LaurentQSeries::monomial(1, 0, e, order);
            let mut prev = n;
            for &r in rs {
                div_pochhammer(&mut s, QMonomial::q(1), 1, prev - r);
                prev = r;
            }
            mul_pochhammer(&mut s, QMonomial::z(0), 1, last + 1);
            mul_pochhammer(&mut s, QMonomial::z_inv(1), 1, last);
            if family == Family::A {
                div_pochhammer(&mut s, QMonomial::q(1), 1, 2 * last + 1);
            } else {
                div_pochhammer(&mut s, QMonomial::q(1), 1, last);
                div_pochhammer(&mut s, QMonomial::q(1), 2, last + 1);
            }
            s
        }
        Family::B => {
            // q^{n−r_1 + 2(r_1−r_2) + … + 2^{k−1}(r_{k−1}−r_k)}
            let mut e = 0;
            let mut prev = n;
            for (i, &r) in rs.iter().enumerate() {
                e += (1 << i) * (prev - r);
                prev = r;
            }
            let mut s = LaurentQSeries::monomial(1, 0, e, order);
            let mut prev = n;
            for (i, &r) in rs.iter().enumerate() {
                // (−q^{2^{i+1}}; q^{2^i})_{2r_{i+1}} / (q^{2^{i+1}}; q^{2^{i+1}})_{r_i − r_{i+1}}
                let qi = 1usize << i;
                mul_pochhammer(&mut s, QMonomial::neg_q(2 * qi), qi, 2 * r);
                div_pochhammer(&mut s, QMonomial::q(2 * qi), 2 * qi, prev - r);
                prev = r;
            }
            let big = 1usize << k;
            mul_pochhammer(&mut s, QMonomial::z(0), big, last + 1);
            mul_pochhammer(&mut s, QMonomial::z_inv(big), big, last);
            div_pochhammer(&mut s, QMonomial::q(big), big, 2 * last + 1);
            s
        }
    }
}

/// Σ_n z^{−n} q^{c·n(n+1)} (1 − z^{2n+1}) over terms below q^N, where the
/// exponent is (k+1)n(n+1), (2^k+1)n(n+1)/2 or (k+2)n(n+1)/2.
pub fn theta_rhs(family: Family, k: usize, order: usize) -> LaurentQSeries {
    let mut s = LaurentQSeries::zero(order);
    for n in 0usize.. {
        let e = match family {
            Family::A => (k + 1) * n * (n + 1),
            Family::B => ((1 << k) + 1) * n * (n + 1) / 2,
            Family::C => (k + 2) * n * (n + 1) / 2,
        };
        if e >= order {
            break;
        }
        s.add_assign_ref(&LaurentQSeries::monomial(1, -(n as i64), e, order));
        s.add_assign_ref(&LaurentQSeries::monomial(-1, n as i64 + 1, e, order));
    }
    s
}

/// Registered identity variants per family.
///
/// Family B carries three readings of the base-change bookkeeping:
/// `beta0` is the right side as printed, `beta1` multiplies it by
/// (1−q)/(1−q^{2^k}), and `beta2` takes the outer weights at base q².
pub fn registered_variants(family: Family) -> &'static [&'static str] {
    match family {
        Family::A | Family::C => &["proof"],
        Family::B => &["beta0", "beta1", "beta2"],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub q_exp: usize,
    pub z_exp: i64,
    pub lhs_coeff: String,
    pub rhs_coeff: String,
    pub lhs_poly: String,
    pub rhs_poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub family: Family,
    pub k: usize,
    pub order: usize,
    pub variant: String,
    pub mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn sides(family: Family, k: usize, order: usize, variant: &str) -> (LaurentQSeries, LaurentQSeries) {
    match (family, variant) {
        (Family::B, "beta1") => {
            let mut rhs = theta_rhs(family, k, order);
            rhs.mul_binomial(&BigInt::from(1), 0, 1);
            rhs.div_binomial(&BigInt::from(1), 0, 1 << k);
            (multisum_lhs(family, k, order), rhs)
        }
        (Family::B, "beta2") => (
            multisum_with_outer_base(family, k, order, 2),
            theta_rhs(family, k, order),
        ),
        _ => (multisum_lhs(family, k, order), theta_rhs(family, k, order)),
    }
}

/// Compares the multi-sum against the variant's right-hand side mod q^N.
pub fn verify_identity(
    family: Family,
    k: usize,
    order: usize,
    variant: &str,
) -> Result<IdentityReport, QError> {
    if !registered_variants(family).contains(&variant) {
        return Err(QError::UnknownVariant {
            family,
            variant: variant.to_string(),
        });
    }
    let (lhs, rhs) = sides(family, k, order, variant);
    let mismatch = lhs.first_difference(&rhs).map(|(q_exp, z_exp)| Mismatch {
        q_exp,
        z_exp,
        lhs_coeff: lhs.coeff(q_exp).coeff(z_exp).to_string(),
        rhs_coeff: rhs.coeff(q_exp).coeff(z_exp).to_string(),
        lhs_poly: lhs.coeff(q_exp).to_string(),
        rhs_poly: rhs.coeff(q_exp).to_string(),
    });
    Ok(IdentityReport {
        family,
        k,
        order,
        variant: variant.to_string(),
        mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyArbitration {
    pub family: Family,
    pub k: usize,
    pub order: usize,
    pub reports: Vec<IdentityReport>,
    /// Set only when exactly one variant passes.
    pub winner: Option<String>,
}

/// [`arbitrate_family`] for family B, the only family with competing variants.
pub fn arbitrate_family_b(k: usize, order: usize) -> FamilyArbitration {
    arbitrate_family(Family::B, k, order)
}

/// Runs every registered variant of `family`; the winner is the unique
/// passing variant, if there is one.
pub fn arbitrate_family(family: Family, k: usize, order: usize) -> FamilyArbitration {
    let reports: Vec<IdentityReport> = registered_variants(family)
        .iter()
        .map(|v| verify_identity(family, k, order, v).expect("registered variant"))
        .collect();
    let passing: Vec<&IdentityReport> = reports.iter().filter(|r| r.passed()).collect();
    let winner = if passing.len() == 1 {
        Some(passing[0].variant.clone())
    } else {
        None
    };
    FamilyArbitration {
        family,
        k,
        order,
        reports,
        winner,
    }
}
