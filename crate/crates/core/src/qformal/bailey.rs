//! Bailey pairs relative to (a, Q) = (q^A, q^B) and the three chain
//! transforms used to build the multi-sum families.
//!
//! A pair satisfies β_n = Σ_{j≤n} α_j / ((Q;Q)_{n−j} (aQ;Q)_{n+j}).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::pochhammer::{div_pochhammer, mul_pochhammer};
use super::{LaurentQSeries, QError, QMonomial};
use crate::cache::WriteOnceCache;

type TermFn = dyn Fn(usize, usize) -> LaurentQSeries + Send + Sync;

/// A Bailey pair with α_n, β_n available as truncated series on demand.
#[derive(Clone)]
pub struct BaileyPair {
    label: String,
    a_exp: usize,
    base_exp: usize,
    alpha: Arc<TermFn>,
    beta: Arc<TermFn>,
}

impl fmt::Debug for BaileyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaileyPair")
            .field("label", &self.label)
            .field("a_exp", &self.a_exp)
            .field("base_exp", &self.base_exp)
            .finish()
    }
}

impl BaileyPair {
    pub fn new(
        label: impl Into<String>,
        a_exp: usize,
        base_exp: usize,
        alpha: impl Fn(usize, usize) -> LaurentQSeries + Send + Sync + 'static,
        beta: impl Fn(usize, usize) -> LaurentQSeries + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            a_exp,
            base_exp,
            alpha: Arc::new(alpha),
            beta: Arc::new(beta),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `a = q^{a_exp}`.
    pub fn a_exp(&self) -> usize {
        self.a_exp
    }

    /// The pair's base is `q^{base_exp}`.
    pub fn base_exp(&self) -> usize {
        self.base_exp
    }

    pub fn alpha(&self, n: usize, order: usize) -> LaurentQSeries {
        (self.alpha)(n, order)
    }

    pub fn beta(&self, n: usize, order: usize) -> LaurentQSeries {
        (self.beta)(n, order)
    }

    /// Same pair with α_n negated at a single index; used for fault injection.
    pub fn with_alpha_negated_at(&self, index: usize) -> BaileyPair {
        let alpha = Arc::clone(&self.alpha);
        let mut out = self.clone();
        out.label = format!("{}[-alpha_{index}]", self.label);
        out.alpha = Arc::new(move |n, order| {
            let a = alpha(n, order);
            if n == index {
                a.neg()
            } else {
                a
            }
        });
        out
    }
}

fn memoized(f: impl Fn(usize, usize) -> LaurentQSeries + Send + Sync + 'static) -> Arc<TermFn> {
    let cache: WriteOnceCache<(usize, usize), LaurentQSeries> = WriteOnceCache::new();
    Arc::new(move |n, order| (*cache.get_or_insert_with((n, order), || f(n, order))).clone())
}

fn seed_beta_cache() -> &'static WriteOnceCache<(usize, usize, usize), LaurentQSeries> {
    static CACHE: OnceLock<WriteOnceCache<(usize, usize, usize), LaurentQSeries>> = OnceLock::new();
    CACHE.get_or_init(WriteOnceCache::new)
}

/// α_n = (−z)^{−n} Q^{n(n+1)/2} (1 − z^{2n+1}) / (1 − Q) at Q = q^b.
pub(crate) fn seed_alpha(b: usize, n: usize, order: usize) -> LaurentQSeries {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut s = LaurentQSeries::monomial(sign, -(n as i64), b * n * (n + 1) / 2, order);
    s.mul_binomial(&BigInt::from(1), 2 * n as i64 + 1, 0);
    s.div_binomial(&BigInt::from(1), 0, b);
    s
}

/// β_n = (z;Q)_{n+1} (Q/z;Q)_n / (Q;Q)_{2n+1} at Q = q^b. Cached per (b, n, N).
pub(crate) fn seed_beta(b: usize, n: usize, order: usize) -> LaurentQSeries {
    let v = seed_beta_cache().get_or_insert_with((b, n, order), || {
        let mut s = LaurentQSeries::one(order);
        mul_pochhammer(&mut s, QMonomial::z(0), b, n + 1);
        mul_pochhammer(&mut s, QMonomial::z_inv(b), b, n);
        div_pochhammer(&mut s, QMonomial::q(b), b, 2 * n + 1);
        s
    });
    (*v).clone()
}

/// The seed pair relative to (Q, Q) with Q = q^b.
pub fn seed_pair(base_exp: usize) -> BaileyPair {
    assert!(base_exp >= 1);
    let b = base_exp;
    BaileyPair::new(
        format!("seed(q^{b})"),
        b,
        b,
        move |n, order| seed_alpha(b, n, order),
        move |n, order| seed_beta(b, n, order),
    )
}

/// Chain transforms. `S1` and `S2` keep the base; `D1` halves it at every
/// step (a pair at (a², q²) becomes one at (a, q)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chain {
    S1,
    D1,
    S2,
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Chain::S1 => "S1",
            Chain::D1 => "D1",
            Chain::S2 => "S2",
        };
        f.write_str(s)
    }
}

/// Visits every chain n ≥ r_1 ≥ … ≥ r_k ≥ 0 (the slice holds r_1..r_k).
fn for_each_chain(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(prev: usize, depth: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if depth == k {
            f(buf);
            return;
        }
        for r in 0..=prev {
            buf.push(r);
            rec(r, depth + 1, k, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(k);
    rec(n, 0, k, &mut buf, f);
}

/// Σ over r_k of (Σ of tuple weights ending in r_k) · β_{r_k}.
fn contract(
    n: usize,
    order: usize,
    k: usize,
    weight: impl Fn(usize, &[usize], usize) -> LaurentQSeries,
    inner: &BaileyPair,
) -> LaurentQSeries {
    let mut by_last: BTreeMap<usize, LaurentQSeries> = BTreeMap::new();
    for_each_chain(n, k, &mut |rs| {
        let w = weight(n, rs, order);
        let last = *rs.last().unwrap();
        by_last
            .entry(last)
            .or_insert_with(|| LaurentQSeries::zero(order))
            .add_assign_ref(&w);
    });
    let mut total = LaurentQSeries::zero(order);
    for (r, w) in by_last {
        if w.is_zero() {
            continue;
        }
        total.add_assign_ref(&(&w * &inner.beta(r, order)));
    }
    total
}

/// Applies `chain` k times, with β' given by the closed k-fold nested sum
/// (not by repeated single steps).
pub fn chain_apply(chain: Chain, pair: &BaileyPair, k: usize) -> Result<BaileyPair, QError> {
    if k == 0 {
        return Ok(pair.clone());
    }
    let a = pair.a_exp;
    let b = pair.base_exp;
    let inner = pair.clone();
    let label = format!("{chain}^{k}({})", pair.label);
    match chain {
        Chain::S1 => {
            // α'_n = a^{kn} Q^{kn²} α_n
            // β'_n = Σ a^{Σr} Q^{Σr²} / Π (Q;Q)_{r_{i-1}-r_i} · β_{r_k}
            let alpha_in = Arc::clone(&pair.alpha);
            let alpha = move |n: usize, order: usize| {
                alpha_in(n, order).mul_monomial(&BigInt::from(1), 0, k * (a * n + b * n * n))
            };
            let beta = move |n: usize, order: usize| {
                contract(
                    n,
                    order,
                    k,
                    |n, rs, order| {
                        let e: usize = rs.iter().map(|&r| a * r + b * r * r).sum();
                        let mut w = LaurentQSeries::monomial(1, 0, e, order);
                        let mut prev = n;
                        for &r in rs {
                            div_pochhammer(&mut w, QMonomial::q(b), b, prev - r);
                            prev = r;
                        }
                        w
                    },
                    &inner,
                )
            };
            Ok(BaileyPair {
                label,
                a_exp: a,
                base_exp: b,
                alpha: memoized(alpha),
                beta: memoized(beta),
            })
        }
        Chain::D1 => {
            let scale = 1usize << k;
            if !a.is_multiple_of(scale) || !b.is_multiple_of(scale) {
                return Err(QError::IncompatibleBase {
                    chain,
                    a_exp: a,
                    base_exp: b,
                });
            }
            let (a_out, b_out) = (a / scale, b / scale);
            // Level i = 1..k works at Q_i = q^{b_out 2^{i-1}}, a_i = q^{a_out 2^{i-1}}:
            // (−a_i Q_i; Q_i)_{2r_i} Q_i^{r_{i-1}-r_i} / (Q_i²; Q_i²)_{r_{i-1}-r_i}
            let beta = move |n: usize, order: usize| {
                contract(
                    n,
                    order,
                    k,
                    |n, rs, order| {
                        let mut e = 0usize;
                        let mut prev = n;
                        for (i, &r) in rs.iter().enumerate() {
                            e += (b_out << i) * (prev - r);
                            prev = r;
                        }
                        let mut w = LaurentQSeries::monomial(1, 0, e, order);
                        let mut prev = n;
                        for (i, &r) in rs.iter().enumerate() {
                            let qi = b_out << i;
                            let ai = a_out << i;
                            mul_pochhammer(&mut w, QMonomial::neg_q(ai + qi), qi, 2 * r);
                            div_pochhammer(&mut w, QMonomial::q(2 * qi), 2 * qi, prev - r);
                            prev = r;
                        }
                        w
                    },
                    &inner,
                )
            };
            let alpha_in = Arc::clone(&pair.alpha);
            Ok(BaileyPair {
                label,
                a_exp: a_out,
                base_exp: b_out,
                alpha: alpha_in,
                beta: memoized(beta),
            })
        }
        Chain::S2 => {
            if !(a + b).is_multiple_of(2) {
                return Err(QError::IncompatibleBase {
                    chain,
                    a_exp: a,
                    base_exp: b,
                });
            }
            let c = (a + b) / 2; // √(aQ) = q^c
            let alpha_in = Arc::clone(&pair.alpha);
            let alpha = move |n: usize, order: usize| {
                alpha_in(n, order).mul_monomial(&BigInt::from(1), 0, k * (a * n + b * n * n) / 2)
            };
            let beta = move |n: usize, order: usize| {
                let mut total = contract(
                    n,
                    order,
                    k,
                    |n, rs, order| {
                        let e: usize = rs.iter().map(|&r| (a * r + b * r * r) / 2).sum();
                        let mut w = LaurentQSeries::monomial(1, 0, e, order);
                        let mut prev = n;
                        for &r in rs {
                            div_pochhammer(&mut w, QMonomial::q(b), b, prev - r);
                            prev = r;
                        }
                        mul_pochhammer(&mut w, QMonomial::neg_q(c), b, *rs.last().unwrap());
                        w
                    },
                    &inner,
                );
                div_pochhammer(&mut total, QMonomial::neg_q(c), b, n);
                total
            };
            Ok(BaileyPair {
                label,
                a_exp: a,
                base_exp: b,
                alpha: memoized(alpha),
                beta: memoized(beta),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMismatch {
    pub n: usize,
    pub q_exp: usize,
    pub z_exp: i64,
    pub beta: String,
    pub alpha_sum: String,
}

/// Outcome of checking the defining relation for n ≤ n_max modulo q^N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaileyCheck {
    pub label: String,
    pub n_max: usize,
    pub order: usize,
    pub failure: Option<PairMismatch>,
}

impl BaileyCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Verifies β_n = Σ_j α_j / ((Q;Q)_{n−j} (aQ;Q)_{n+j}) for n ≤ n_max.
pub fn bailey_check(pair: &BaileyPair, n_max: usize, order: usize) -> BaileyCheck {
    let (a, b) = (pair.a_exp, pair.base_exp);
    let alphas: Vec<LaurentQSeries> = (0..=n_max).map(|j| pair.alpha(j, order)).collect();
    let mut failure = None;
    for n in 0..=n_max {
        let mut sum = LaurentQSeries::zero(order);
        for (j, alpha) in alphas.iter().enumerate().take(n + 1) {
            let mut term = alpha.clone();
            div_pochhammer(&mut term, QMonomial::q(b), b, n - j);
            div_pochhammer(&mut term, QMonomial::q(a + b), b, n + j);
            sum.add_assign_ref(&term);
        }
        let beta = pair.beta(n, order);
        if let Some((q_exp, z_exp)) = beta.first_difference(&sum) {
            failure = Some(PairMismatch {
                n,
                q_exp,
                z_exp,
                beta: beta.coeff(q_exp).to_string(),
                alpha_sum: sum.coeff(q_exp).to_string(),
            });
            break;
        }
    }
    BaileyCheck {
        label: pair.label.clone(),
        n_max,
        order,
        failure,
    }
}
