//! Direct high-precision evaluation of the left-hand sides: the theta
//! differences, the nested multi-sums, the character partial theta and the
//! alternating theta of the `F_k` family.
//!
//! All sums run in a fixed order, so results are reproducible bit for bit
//! regardless of how callers schedule them.

use thiserror::Error;

use crate::exact::CharacterSpec;
use crate::hpreal::{HReal, HpError, Precision};
use crate::qformal::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("multi-sum evaluation needs t >= 1/16 and k <= 2 (got t = {t}, k = {k})")]
    CostGuard { t: String, k: usize },
    #[error("chain depth k must be at least {min}, got {k}")]
    Depth { min: usize, k: usize },
    #[error("need 0 < m < l, got l = {l}, m = {m}")]
    OlParams { l: i64, m: i64 },
    #[error("unknown variant '{variant}' for family {family}")]
    UnknownVariant { family: Family, variant: String },
    #[error(transparent)]
    Hp(#[from] HpError),
}

/// Guard digits carried by every evaluator on top of P.
const EXTRA_DIGITS: u32 = 15;
/// Consecutive sub-threshold terms before a tail is cut.
const QUIET_RUN: usize = 10;

/// Quadratic-exponent coefficient c₂ of each family's theta difference.
pub fn theta_c2(family: Family, k: usize, prec: &Precision) -> HReal {
    match family {
        Family::A => prec.int(k as i64 + 1),
        Family::B => prec.ratio((1i64 << k) + 1, 2),
        Family::C => prec.ratio(k as i64 + 2, 2),
    }
}

fn positive(x: &HReal, name: &'static str) -> Result<(), EvalError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(EvalError::NonPositive(name))
    }
}

fn threshold(prec: &Precision, hp: &Precision) -> HReal {
    hp.pow10(-(prec.digits() as i64) - 10)
}

/// Σ_{n≥1} s(n)·e^{a·n − c·n²} by the ratio recurrence
/// e^{a(n+1) − c(n+1)²} = e^{an − cn²} · e^{a − c(2n+1)}.
///
/// The tail is cut after ten consecutive envelope terms below the threshold
/// (past the envelope's peak); `tail_factor` > 1 keeps going to that multiple
/// of the cut index, for stability checks.
fn gauss_sum(
    a: &HReal,
    c: &HReal,
    sign: impl Fn(u64) -> i32,
    thresh: &HReal,
    tail_factor: u64,
    hp: &Precision,
) -> Result<HReal, EvalError> {
    let mut term = hp.exp(&(a - c))?;
    let mut ratio = hp.exp(&(a - &c.mul_int(3)))?;
    let step = hp.exp(&(-c.mul_int(2)))?;
    let peak = (a.to_f64() / (2.0 * c.to_f64())).max(0.0);
    let mut sum = hp.int(0);
    let mut quiet = 0usize;
    let mut n = 1u64;
    let mut stop_at: Option<u64> = None;
    loop {
        match sign(n) {
            0 => {}
            s if s > 0 => sum = &sum + &term,
            _ => sum = &sum - &term,
        }
        if let Some(end) = stop_at {
            if n >= end {
                break;
            }
        } else {
            if term.cmp_value(thresh).is_lt() && n as f64 > peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= QUIET_RUN {
                if tail_factor <= 1 {
                    break;
                }
                stop_at = Some(n * tail_factor);
            }
        }
        term = &term * &ratio;
        ratio = &ratio * &step;
        n += 1;
    }
    Ok(sum)
}

fn theta_diff_impl(
    family: Family,
    k: usize,
    t: &HReal,
    v: &HReal,
    w: &HReal,
    prec: &Precision,
    tail_factor: u64,
) -> Result<HReal, EvalError> {
    positive(t, "t")?;
    positive(w, "w")?;
    if k < 1 {
        return Err(EvalError::Depth { min: 1, k });
    }
    let hp = prec.raised(EXTRA_DIGITS);
    let c = &(&theta_c2(family, k, &hp) * w) * &t.square();
    let a = v * t;
    let thresh = threshold(prec, &hp);
    let plus = gauss_sum(&a, &c, |_| 1, &thresh, tail_factor, &hp)?;
    let minus = gauss_sum(&(-&a), &c, |_| 1, &thresh, tail_factor, &hp)?;
    Ok(prec.round(&(&plus - &minus)))
}

/// Σ_{n≥1} (e^{nvt − c₂wn²t²} − e^{−nvt − c₂wn²t²}): the family's
/// multi-sum minus 1, written as a theta difference.
pub fn eval_theta_diff(
    family: Family,
    k: usize,
    t: &HReal,
    v: &HReal,
    w: &HReal,
    prec: &Precision,
) -> Result<HReal, EvalError> {
    theta_diff_impl(family, k, t, v, w, prec, 1)
}

/// Variants accepted by [`eval_multisum`].
///
/// `proof` substitutes z as in the theta-difference derivation; `statement`
/// uses the z as written in the closed-form statement (which differs for B and
/// C). Family B has no plain `proof` reading: `beta0`, `beta1` and `beta2`
/// mirror the formal variants, all with the derivation's z, and `statement`
/// combines the `beta1` normalisation with the statement's z.
pub fn multisum_variants(family: Family) -> &'static [&'static str] {
    match family {
        Family::A | Family::C => &["proof", "statement"],
        Family::B => &["beta0", "beta1", "beta2", "statement"],
    }
}

/// Exponent of q = e^{−wt²} in z = e^{−vt}·q^{e}, as a ratio (num, den).
fn z_shift(family: Family, k: usize, variant: &str) -> (i64, i64) {
    let k = k as i64;
    match (family, variant) {
        (Family::A, _) => (k + 1, 1),
        (Family::B, "statement") => ((1 << k) + 1, 1),
        (Family::B, _) => ((1 << k) + 1, 2),
        (Family::C, "statement") => (k + 1, 2),
        (Family::C, _) => (k + 2, 2),
    }
}

/// Powers q^j, grown on demand by repeated multiplication.
struct QPowers {
    q: HReal,
    pows: Vec<HReal>,
}

impl QPowers {
    fn new(q: HReal, hp: &Precision) -> Self {
        Self {
            pows: vec![hp.int(1), q.clone()],
            q,
        }
    }

    fn get(&mut self, j: usize) -> HReal {
        while self.pows.len() <= j {
            let next = self.pows.last().unwrap() * &self.q;
            self.pows.push(next);
        }
        self.pows[j].clone()
    }
}

/// (x·q^{s}; q^{d})_m for m = 0..=len, as a table, where x·q^s is
/// `sign`·`x`·q^{s}.
fn poch_table(x: &HReal, s: usize, d: usize, len: usize, qp: &mut QPowers, hp: &Precision) -> Vec<HReal> {
    let one = hp.int(1);
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = one.clone();
    out.push(acc.clone());
    for j in 0..len {
        let factor = &one - &(x * &qp.get(s + j * d));
        acc = &acc * &factor;
        out.push(acc.clone());
    }
    out
}

/// Nested multi-sum plus its outer sum, with real q and z; returns the full
/// Σ_n (outer weight)·(inner sum), not yet minus 1.
#[allow(clippy::too_many_arguments)]
fn multisum_value(
    family: Family,
    k: usize,
    q: &HReal,
    z: &HReal,
    outer_base: usize,
    n_max: usize,
    hp: &Precision,
) -> HReal {
    let one = hp.int(1);
    let mut qp = QPowers::new(q.clone(), hp);
    let zinv = z.recip();
    let neg_one = hp.int(-1);

    let level: Vec<HReal> = match family {
        Family::A | Family::C => {
            let q_poch = poch_table(&one, 1, 1, 2 * n_max + 2, &mut qp, hp); // (q;q)_m
            let z_poch = poch_table(z, 0, 1, n_max + 1, &mut qp, hp); // (z;q)_m
            let zi_poch = poch_table(&zinv, 1, 1, n_max, &mut qp, hp); // (q/z;q)_m
            let mut level: Vec<HReal> = match family {
                Family::A => (0..=n_max)
                    .map(|r| &(&z_poch[r + 1] * &zi_poch[r]) / &q_poch[2 * r + 1])
                    .collect(),
                _ => {
                    // (q;q²)_{r+1}
                    let odd = poch_table(&one, 1, 2, n_max + 1, &mut qp, hp);
                    (0..=n_max)
                        .map(|r| &(&z_poch[r + 1] * &zi_poch[r]) / &(&q_poch[r] * &odd[r + 1]))
                        .collect()
                }
            };
            let weights: Vec<HReal> = (0..=n_max)
                .map(|r| match family {
                    Family::A => qp.get(r * r + r),
                    _ => qp.get(r * (r + 1) / 2),
                })
                .collect();
            for _ in 0..k {
                let terms: Vec<HReal> = (0..=n_max).map(|r| &weights[r] * &level[r]).collect();
                level = (0..=n_max)
                    .map(|n| {
                        let mut acc = hp.int(0);
                        for r in 0..=n {
                            acc = &acc + &(&terms[r] / &q_poch[n - r]);
                        }
                        acc
                    })
                    .collect();
            }
            level
        }
        Family::B => {
            let big = 1usize << k;
            let z_poch = poch_table(z, 0, big, n_max + 1, &mut qp, hp);
            let zi_poch = poch_table(&zinv, big, big, n_max, &mut qp, hp);
            let bq_poch = poch_table(&one, big, big, 2 * n_max + 1, &mut qp, hp);
            let mut level: Vec<HReal> = (0..=n_max)
                .map(|r| &(&z_poch[r + 1] * &zi_poch[r]) / &bq_poch[2 * r + 1])
                .collect();
            for i in (1..=k).rev() {
                let qi = 1usize << (i - 1);
                // 1/(q^{2qi}; q^{2qi})_m · q^{qi·m}
                let den = poch_table(&one, 2 * qi, 2 * qi, n_max, &mut qp, hp);
                let kernel: Vec<HReal> = (0..=n_max).map(|m| &qp.get(qi * m) / &den[m]).collect();
                // (−q^{2qi}; q^{qi})_{2r}
                let num = poch_table(&neg_one, 2 * qi, qi, 2 * n_max, &mut qp, hp);
                let terms: Vec<HReal> = (0..=n_max).map(|r| &num[2 * r] * &level[r]).collect();
                level = (0..=n_max)
                    .map(|n| {
                        let mut acc = hp.int(0);
                        for r in 0..=n {
                            acc = &acc + &(&kernel[n - r] * &terms[r]);
                        }
                        acc
                    })
                    .collect();
            }
            level
        }
    };

    // outer weight (Q;Q)_n (−1)^n Q^{n(n+1)/2}, Q = q^{base}; C also divides by (−q;q)_n
    let outer_poch = poch_table(&one, outer_base, outer_base, n_max, &mut qp, hp);
    let neg_poch = poch_table(&neg_one, 1, 1, n_max, &mut qp, hp);
    let mut total = hp.int(0);
    for (n, inner) in level.iter().enumerate() {
        let mut wgt = &outer_poch[n] * &qp.get(outer_base * n * (n + 1) / 2);
        if family == Family::C {
            wgt = &wgt / &neg_poch[n];
        }
        let term = &wgt * inner;
        total = if n % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

/// The family's multi-sum minus 1 at q = e^{−wt²} and z per `variant`.
///
/// The outer sum is cut where q^{n(n+1)/2} < 10^{−P−20}; the inner sums are
/// finite and evaluated exactly level by level.
pub fn eval_multisum(
    family: Family,
    k: usize,
    t: &HReal,
    v: &HReal,
    w: &HReal,
    prec: &Precision,
    variant: &str,
) -> Result<HReal, EvalError> {
    positive(t, "t")?;
    positive(w, "w")?;
    if !multisum_variants(family).contains(&variant) {
        return Err(EvalError::UnknownVariant {
            family,
            variant: variant.to_string(),
        });
    }
    if k < 1 {
        return Err(EvalError::Depth { min: 1, k });
    }
    if k > 2 || t.cmp_value(&prec.ratio(1, 16)).is_lt() {
        return Err(EvalError::CostGuard {
            t: t.to_decimal(6),
            k,
        });
    }
    let hp = prec.raised(EXTRA_DIGITS + 5);
    let wt2 = w * &t.square();
    let q = hp.exp(&(-&wt2))?;
    let (num, den) = z_shift(family, k, variant);
    let z = hp.exp(&(-&(&(v * t) + &(&wt2 * &hp.ratio(num, den)))))?;

    let budget = (prec.digits() + 20) as f64 * std::f64::consts::LN_10;
    let mut n_max = 1usize;
    while (n_max * (n_max + 1)) as f64 / 2.0 * wt2.to_f64() < budget {
        n_max += 1;
    }
    let outer_base = if variant == "beta2" { 2 } else { 1 };
    let mut value = multisum_value(family, k, &q, &z, outer_base, n_max, &hp);
    if family == Family::B && (variant == "beta1" || variant == "statement") {
        // multiply by (1 − q^{2^k})/(1 − q)
        let one = hp.int(1);
        let factor = &(&one - &q.powi(1 << k)) / &(&one - &q);
        value = &value * &factor;
    }
    Ok(prec.round(&(&value - &hp.int(1))))
}

/// Σ_{n≥1} χ(n) e^{−wn²t² − vnt}.
pub fn eval_theta_chi(
    chi: &CharacterSpec,
    t: &HReal,
    v: &HReal,
    w: &HReal,
    prec: &Precision,
) -> Result<HReal, EvalError> {
    positive(t, "t")?;
    positive(w, "w")?;
    let hp = prec.raised(EXTRA_DIGITS);
    let c = w * &t.square();
    let a = -(v * t);
    let s = gauss_sum(&a, &c, |n| chi.value(n), &threshold(prec, &hp), 1, &hp)?;
    Ok(prec.round(&s))
}

/// Σ_{j≥0} (−1)^j e^{−(k−1)(lj+m)²t}: the Ono–Lovejoy side
/// e^{−(k−1)m²t} F_k(e^{−lmt}, e^{−l²t}) after the single-sum reduction.
pub fn eval_theta_ol(l: i64, m: i64, k: usize, t: &HReal, prec: &Precision) -> Result<HReal, EvalError> {
    positive(t, "t")?;
    if k < 2 {
        return Err(EvalError::Depth { min: 2, k });
    }
    if !(0 < m && m < l) {
        return Err(EvalError::OlParams { l, m });
    }
    let hp = prec.raised(EXTRA_DIGITS);
    let km1 = (k - 1) as i64;
    let thresh = threshold(prec, &hp);
    // exponent E_j = (k−1)t(lj+m)²; E_{j+1} − E_j = (k−1)t·l·(2lj + 2m + l)
    let mut term = hp.exp(&(-(t.mul_int(km1 * m * m))))?;
    let mut ratio = hp.exp(&(-(t.mul_int(km1 * l * (2 * m + l)))))?;
    let step = hp.exp(&(-(t.mul_int(2 * km1 * l * l))))?;
    let mut sum = hp.int(0);
    let mut quiet = 0;
    let mut j = 0u64;
    loop {
        sum = if j.is_multiple_of(2) { &sum + &term } else { &sum - &term };
        if term.cmp_value(&thresh).is_lt() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                break;
            }
        }
        term = &term * &ratio;
        ratio = &ratio * &step;
        j += 1;
    }
    Ok(prec.round(&sum))
}

/// F_k(e^{−vt}, e^{−wt²}) − 1 = Σ_{n≥1} (−1)^n e^{−(k−1)wn²t² − 2(k−1)vnt}.
pub fn eval_fk_minus_one(
    k: usize,
    t: &HReal,
    v: &HReal,
    w: &HReal,
    prec: &Precision,
) -> Result<HReal, EvalError> {
    positive(t, "t")?;
    positive(w, "w")?;
    if k < 2 {
        return Err(EvalError::Depth { min: 2, k });
    }
    let hp = prec.raised(EXTRA_DIGITS);
    let km1 = (k - 1) as i64;
    let c = (w * &t.square()).mul_int(km1);
    let a = -((v * t).mul_int(2 * km1));
    let s = gauss_sum(&a, &c, |n| if n % 2 == 0 { 1 } else { -1 }, &threshold(prec, &hp), 1, &hp)?;
    Ok(prec.round(&s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn h(prec: &Precision, s: &str) -> HReal {
        prec.parse(s).unwrap()
    }

    fn within(a: &HReal, b: &HReal, e: i64, prec: &Precision) -> bool {
        (a - b).abs().cmp_value(&prec.pow10(e)).is_le()
    }

    #[test]
    fn theta_diff_zero_at_v0() {
        let prec = p();
        for fam in [Family::A, Family::B, Family::C] {
            let r = eval_theta_diff(fam, 2, &h(&prec, "0.1"), &prec.int(0), &prec.int(1), &prec).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn theta_diff_antisymmetric() {
        let prec = p();
        let t = h(&prec, "0.05");
        let w = h(&prec, "1.5");
        for v in ["0.5", "2", "-1.25"] {
            let v = h(&prec, v);
            let a = eval_theta_diff(Family::A, 1, &t, &v, &w, &prec).unwrap();
            let b = eval_theta_diff(Family::A, 1, &t, &(-&v), &w, &prec).unwrap();
            assert!((&a + &b).is_zero());
        }
    }

    #[test]
    fn theta_diff_large_t_bound() {
        let prec = p();
        let v = h(&prec, "0.5");
        let w = prec.int(1);
        let t = prec.int(2);
        let r = eval_theta_diff(Family::A, 1, &t, &v, &w, &prec).unwrap();
        let bound = prec.exp(&(&(&v * &t) - &w.mul_int(4))).unwrap();
        assert!(r.abs().cmp_value(&bound).is_lt());
        // n = 2 enters at e^{−30}
        let c = w.mul_int(8);
        let first = &prec.exp(&(&(&v * &t) - &c)).unwrap() - &prec.exp(&(-&(&(&v * &t) + &c))).unwrap();
        assert!(within(&r, &first, -12, &prec));
        assert!(!within(&r, &first, -14, &prec));
    }

    #[test]
    fn theta_diff_tail_stable() {
        let prec = p();
        let t = h(&prec, "0.01");
        let v = h(&prec, "3");
        let w = prec.int(1);
        let a = theta_diff_impl(Family::C, 2, &t, &v, &w, &prec, 1).unwrap();
        let b = theta_diff_impl(Family::C, 2, &t, &v, &w, &prec, 2).unwrap();
        let rel = (&(&a - &b) / &b).abs();
        assert!(rel.cmp_value(&prec.pow10(-(prec.digits() as i64) + 5)).is_le());
    }

    #[test]
    fn theta_diff_against_direct_exp() {
        // term-by-term exp oracle without the ratio recurrence
        let prec = p();
        let t = h(&prec, "0.25");
        let v = h(&prec, "0.5");
        let w = prec.int(1);
        let c = (&w * &t.square()).mul_int(2);
        let mut sum = prec.int(0);
        for n in 1..200i64 {
            let quad = c.mul_int(n * n);
            let lin = (&v * &t).mul_int(n);
            sum = &sum + &prec.exp(&(&lin - &quad)).unwrap();
            sum = &sum - &prec.exp(&(-&(&lin + &quad))).unwrap();
        }
        let r = eval_theta_diff(Family::A, 1, &t, &v, &w, &prec).unwrap();
        assert!(within(&r, &sum, -(prec.digits() as i64) + 2, &prec));
    }

    #[test]
    fn multisum_matches_theta() {
        let prec = p();
        let cases = [("0.25", "0.5", "1"), ("0.125", "1", "2")];
        for (fam, variant) in [(Family::A, "proof"), (Family::C, "proof"), (Family::B, "beta1")] {
            for k in 1..=2 {
                for (t, v, w) in cases {
                    let (t, v, w) = (h(&prec, t), h(&prec, v), h(&prec, w));
                    let lhs = eval_multisum(fam, k, &t, &v, &w, &prec, variant).unwrap();
                    let rhs = eval_theta_diff(fam, k, &t, &v, &w, &prec).unwrap();
                    assert!(within(&lhs, &rhs, -30, &prec), "{fam} k={k} {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn multisum_other_b_variants_differ() {
        let prec = p();
        let (t, v, w) = (h(&prec, "0.25"), h(&prec, "0.5"), prec.int(1));
        let rhs = eval_theta_diff(Family::B, 1, &t, &v, &w, &prec).unwrap();
        for variant in ["beta0", "beta2", "statement"] {
            let lhs = eval_multisum(Family::B, 1, &t, &v, &w, &prec, variant).unwrap();
            assert!(!within(&lhs, &rhs, -10, &prec), "{variant}");
        }
    }

    #[test]
    fn multisum_v0_vanishes() {
        let prec = p();
        let (t, w) = (h(&prec, "0.25"), prec.int(1));
        for (fam, variant) in [(Family::A, "proof"), (Family::C, "proof"), (Family::B, "beta1")] {
            let r = eval_multisum(fam, 1, &t, &prec.int(0), &w, &prec, variant).unwrap();
            assert!(within(&r, &prec.int(0), -30, &prec), "{fam}");
        }
    }

    #[test]
    fn multisum_guards() {
        let prec = p();
        let (v, w) = (prec.int(1), prec.int(1));
        assert!(matches!(
            eval_multisum(Family::A, 1, &prec.ratio(1, 32), &v, &w, &prec, "proof"),
            Err(EvalError::CostGuard { .. })
        ));
        assert!(matches!(
            eval_multisum(Family::A, 3, &prec.ratio(1, 4), &v, &w, &prec, "proof"),
            Err(EvalError::CostGuard { .. })
        ));
        assert!(matches!(
            eval_multisum(Family::A, 1, &prec.ratio(1, 4), &v, &w, &prec, "beta1"),
            Err(EvalError::UnknownVariant { .. })
        ));
        assert!(eval_multisum(Family::A, 1, &prec.int(0), &v, &w, &prec, "proof").is_err());
        assert!(eval_theta_diff(Family::A, 1, &prec.int(1), &v, &prec.int(-1), &prec).is_err());
    }

    #[test]
    fn theta_chi_minus4_at_t1() {
        let prec = p();
        let chi = CharacterSpec::new(-4).unwrap();
        let w = prec.int(1);
        let r = eval_theta_chi(&chi, &prec.int(1), &prec.int(0), &w, &prec).unwrap();
        // e^{−w} − e^{−9w} + e^{−25w} − …
        let mut oracle = prec.int(0);
        for j in 0..10i64 {
            let n = 2 * j + 1;
            let e = prec.exp(&prec.int(-n * n)).unwrap();
            oracle = if j % 2 == 0 { &oracle + &e } else { &oracle - &e };
        }
        assert!(within(&r, &oracle, -(prec.digits() as i64), &prec));
    }

    #[test]
    fn theta_chi_large_t() {
        let prec = p();
        let t = prec.int(10);
        let w = prec.int(1);
        for d in [-4, 5, -3, 8] {
            let chi = CharacterSpec::new(d).unwrap();
            let r = eval_theta_chi(&chi, &t, &prec.int(0), &w, &prec).unwrap();
            let lead = prec.exp(&prec.int(-100)).unwrap();
            let bound = prec.exp(&prec.int(-380)).unwrap();
            assert!((&r - &lead).abs().cmp_value(&bound).is_lt(), "d={d}");
        }
    }

    #[test]
    fn theta_chi_reordered_sum() {
        let prec = p();
        let chi = CharacterSpec::new(5).unwrap();
        let (t, v, w) = (h(&prec, "0.2"), h(&prec, "0.3"), prec.int(1));
        let r = eval_theta_chi(&chi, &t, &v, &w, &prec).unwrap();
        assert!(!r.is_zero());
        // backwards, each term by its own exp
        let mut sum = prec.int(0);
        for n in (1..150i64).rev() {
            let chi_n = chi.value(n as u64);
            if chi_n == 0 {
                continue;
            }
            let e = prec
                .exp(&(-&(&(&w * &(&t * &t)).mul_int(n * n) + &(&v * &t).mul_int(n))))
                .unwrap();
            sum = if chi_n > 0 { &sum + &e } else { &sum - &e };
        }
        let rel = (&(&r - &sum) / &sum).abs();
        assert!(rel.cmp_value(&prec.pow10(-(prec.digits() as i64) + 5)).is_le());
    }

    #[test]
    fn theta_ol_values() {
        let prec = p();
        let r = eval_theta_ol(3, 1, 2, &prec.int(1), &prec).unwrap();
        let mut oracle = prec.int(0);
        for j in 0..5i64 {
            let e = prec.exp(&prec.int(-(3 * j + 1) * (3 * j + 1))).unwrap();
            oracle = if j % 2 == 0 { &oracle + &e } else { &oracle - &e };
        }
        assert!(within(&r, &oracle, -(prec.digits() as i64), &prec));

        // t → ∞: e^{−(k−1)m²t}(1 + o(1))
        let t = prec.int(5);
        let r = eval_theta_ol(3, 1, 2, &t, &prec).unwrap();
        let lead = prec.exp(&t.mul_int(-1)).unwrap();
        let dev = (&(&r / &lead) - &prec.int(1)).abs();
        let bound = prec.exp(&(t.mul_int(-(16 - 1)).mul_pow2(-1))).unwrap();
        assert!(dev.cmp_value(&bound).is_lt());

        assert!(eval_theta_ol(3, 1, 1, &t, &prec).is_err());
        assert!(eval_theta_ol(3, 3, 2, &t, &prec).is_err());
        assert!(eval_theta_ol(3, 0, 2, &t, &prec).is_err());
    }

    #[test]
    fn fk_direct() {
        let prec = p();
        let (t, v, w) = (h(&prec, "0.3"), h(&prec, "0.5"), prec.int(1));
        let r = eval_fk_minus_one(3, &t, &v, &w, &prec).unwrap();
        let mut oracle = prec.int(0);
        for n in 1..80i64 {
            let e = prec
                .exp(&(-&(&(&w * &t.square()).mul_int(2 * n * n) + &(&v * &t).mul_int(4 * n))))
                .unwrap();
            oracle = if n % 2 == 0 { &oracle + &e } else { &oracle - &e };
        }
        assert!(within(&r, &oracle, -(prec.digits() as i64), &prec));
        assert!(eval_fk_minus_one(1, &t, &v, &w, &prec).is_err());
    }
}
