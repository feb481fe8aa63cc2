//! Truncated small-`t` expansions, empirical remainder orders, and
//! arbitration between competing readings of the expansion constants.
//!
//! Every expansion is `Σ coeff·t^power`. Coefficients combine an exact
//! rational factor (ζ(−n), L(−n, χ), …) with high-precision D_n / erf values.
//! A truncation at order M keeps the powers ≤ M; the remainder should then
//! scale like `t^next_power`, where `next_power` is the first power above M
//! whose coefficient does not vanish by the parity and trivial-zero rules.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{l_chi_neg, lm_value, zeta_neg, CharacterSpec, ExactError, Parity};
use crate::hpreal::{HReal, HpError, Precision};
use crate::qformal::Family;
use crate::series_eval::{self, EvalError};

pub const MAX_ORDER: usize = 30;
/// Remainders must clear 10^{−P+15} at every grid point.
pub const STARVATION_DIGITS: i64 = 15;
/// `|slope − expected|` allowed for a pass.
pub const SLOPE_TOLERANCE: (i64, i64) = (1, 4);
/// Minimum miss of every losing variant for an arbitration winner.
pub const LOSER_MARGIN: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    T11 { k: usize },
    T12 { k: usize },
    T13 { k: usize },
    T14 { d: i64 },
    F14 { k: usize },
    Ol { l: i64, m: i64, k: usize },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::T11 { .. } => "t11",
            Target::T12 { .. } => "t12",
            Target::T13 { .. } => "t13",
            Target::T14 { .. } => "t14",
            Target::F14 { .. } => "f14",
            Target::Ol { .. } => "ol",
        }
    }

    /// Structural parameters as (name, value) pairs.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match *self {
            Target::T11 { k } | Target::T12 { k } | Target::T13 { k } | Target::F14 { k } => {
                vec![("k", k.to_string())]
            }
            Target::T14 { d } => vec![("d", d.to_string())],
            Target::Ol { l, m, k } => {
                vec![("l", l.to_string()), ("m", m.to_string()), ("k", k.to_string())]
            }
        }
    }

    /// Whether v and w enter the target.
    pub fn uses_vw(&self) -> bool {
        !matches!(self, Target::Ol { .. })
    }

    /// The multi-sum family whose theta difference is this target's left side.
    pub fn family(&self) -> Option<Family> {
        match self {
            Target::T11 { .. } => Some(Family::A),
            Target::T12 { .. } => Some(Family::B),
            Target::T13 { .. } => Some(Family::C),
            _ => None,
        }
    }

    fn theta_k(&self) -> Option<usize> {
        match *self {
            Target::T11 { k } | Target::T12 { k } | Target::T13 { k } => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), params.join(","))
    }
}

/// Registered constant variants per target.
///
/// - T11: `proof` (D_{−1} residue form) and `statement` (erf form as
///   displayed); the two agree.
/// - T12: `proof`; `statement` (erf term and D_n prefactor as displayed);
///   `statement-erf` and `statement-exp` change one of the two.
/// - T13: `proof`; `statement` (erf argument as displayed).
/// - F14: `printed` (sign as displayed) and `sign-corrected`.
pub fn registered_variants(target: &Target) -> &'static [&'static str] {
    match target {
        Target::T11 { .. } => &["proof", "statement"],
        Target::T12 { .. } => &["proof", "statement", "statement-erf", "statement-exp"],
        Target::T13 { .. } => &["proof", "statement"],
        Target::T14 { .. } | Target::Ol { .. } => &["proof"],
        Target::F14 { .. } => &["printed", "sign-corrected"],
    }
}

/// Default variant for a target.
pub fn default_variant(target: &Target) -> &'static str {
    match target {
        Target::F14 { .. } => "sign-corrected",
        _ => "proof",
    }
}

/// The formal family-B variant whose identity the T12 variant presupposes.
///
/// T12's `proof` expansion describes the theta difference, which equals the
/// B multi-sum only after the `beta1` normalisation.
pub fn formal_counterpart(target: &Target, variant: &str) -> Option<&'static str> {
    match (target, variant) {
        (Target::T12 { .. }, "proof") => Some("beta1"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymError {
    #[error("unknown variant '{variant}' for target {target}")]
    UnknownVariant { target: String, variant: String },
    #[error("truncation order {0} exceeds {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(
        "precision starvation: remainder {remainder} at t = {t} is below the noise floor 1e{floor_exp}; raise the precision"
    )]
    PrecisionStarvation {
        t: String,
        remainder: String,
        floor_exp: i64,
    },
    #[error("no nonzero coefficient beyond order {0}; the remainder has no power-law order")]
    NoNextPower(usize),
    #[error("arbitration needs at least two variants")]
    TooFewVariants,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Hp(#[from] HpError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    ErfResidue,
    ZetaDn,
    LchiDn,
    OlTerm,
    FkTerm,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::ErfResidue => "erf-residue",
            TermKind::ZetaDn => "zeta-Dn",
            TermKind::LchiDn => "Lchi-Dn",
            TermKind::OlTerm => "OL-term",
            TermKind::FkTerm => "Fk-term",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    pub power: i32,
    pub coeff: HReal,
    pub kind: TermKind,
    /// ζ(−n), L(−n, χ), (1 − 2^{1+n})ζ(−n) or L_{l,m}(−2n).
    pub exact_part: Option<BigRational>,
}

/// Everything needed to build and test one expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionRequest {
    pub target: Target,
    pub v: BigRational,
    pub w: BigRational,
    pub order: usize,
    pub variant: String,
}

impl ExpansionRequest {
    pub fn new(target: Target, v: BigRational, w: BigRational, order: usize, variant: &str) -> Self {
        Self {
            target,
            v,
            w,
            order,
            variant: variant.to_string(),
        }
    }

    pub fn with_variant(&self, variant: &str) -> Self {
        Self {
            variant: variant.to_string(),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), AsymError> {
        if !registered_variants(&self.target).contains(&self.variant.as_str()) {
            return Err(AsymError::UnknownVariant {
                target: self.target.to_string(),
                variant: self.variant.clone(),
            });
        }
        if self.order > MAX_ORDER {
            return Err(AsymError::OrderTooLarge(self.order));
        }
        match self.target {
            Target::T11 { k } | Target::T12 { k } | Target::T13 { k } if k < 1 => {
                return Err(AsymError::Params("k must be at least 1".into()))
            }
            Target::F14 { k } if k < 2 => return Err(AsymError::Params("k must be at least 2".into())),
            Target::Ol { l, m, k } => {
                if k < 2 {
                    return Err(AsymError::Params("k must be at least 2".into()));
                }
                if !(0 < m && m < l) {
                    return Err(AsymError::Params(format!("need 0 < m < l, got l = {l}, m = {m}")));
                }
            }
            Target::T14 { d } => {
                CharacterSpec::new(d)?;
            }
            _ => {}
        }
        if self.target.uses_vw() && !self.w.is_positive() {
            return Err(AsymError::Params("w must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ExpansionSpec {
    pub request: ExpansionRequest,
    /// Sorted by strictly increasing power; structurally zero terms omitted.
    pub terms: Vec<ExpansionTerm>,
    /// Smallest power above the order with a nonzero coefficient.
    pub next_power: Option<i32>,
}

impl ExpansionSpec {
    pub fn powers(&self) -> Vec<i32> {
        self.terms.iter().map(|t| t.power).collect()
    }

    pub fn term(&self, power: i32) -> Option<&ExpansionTerm> {
        self.terms.iter().find(|t| t.power == power)
    }
}

/// How far past the order `next_power` is searched.
const NEXT_POWER_SEARCH: i32 = 64;

/// Whether the coefficient of t^p vanishes by the structural rules:
/// D_n parity at zero argument, trivial zeros of ζ, parity of χ.
fn vanishes(req: &ExpansionRequest, p: i32) -> Result<bool, AsymError> {
    let v_zero = req.v.is_zero();
    Ok(match req.target {
        Target::T11 { .. } | Target::T12 { .. } | Target::T13 { .. } => {
            // the two D_n sums cancel at even n; odd n doubles
            p < -1 || v_zero || (p >= 0 && p % 2 == 0)
        }
        Target::T14 { d } => {
            let chi = CharacterSpec::new(d)?;
            let wrong_parity = match chi.parity() {
                Parity::Even => p % 2 == 0,
                Parity::Odd => p % 2 != 0,
            };
            p < 0 || wrong_parity || (v_zero && p % 2 == 1) || l_chi_neg(&chi, p as usize).is_zero()
        }
        Target::F14 { .. } => p < 0 || (p >= 2 && p % 2 == 0) || (v_zero && p % 2 == 1),
        Target::Ol { l, m, .. } => p < 0 || lm_value(l, m, p as usize)?.is_zero(),
    })
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

struct Ctx {
    prec: Precision,
    hp: Precision,
    v: HReal,
    w: HReal,
}

impl Ctx {
    fn new(req: &ExpansionRequest, prec: &Precision) -> Self {
        let hp = prec.raised(10);
        Self {
            prec: *prec,
            v: hp.rational(&req.v),
            w: hp.rational(&req.w),
            hp,
        }
    }

    fn rat(&self, q: &BigRational) -> HReal {
        self.hp.rational(q)
    }

    /// Λ^{n/2}/n!·(−1)^n for Λ > 0.
    fn scaled_power(&self, lambda: &HReal, n: usize) -> Result<HReal, AsymError> {
        let root = self.hp.sqrt(lambda)?;
        let mut c = &root.powi(n as u32) / &self.hp.rational(&BigRational::from_integer(factorial(n)));
        if n % 2 == 1 {
            c = -c;
        }
        Ok(c)
    }
}

/// Scale S of the theta expansions: 2(k+1)w, (2^k+1)w, (k+2)w.
fn theta_scale(target: &Target, ctx: &Ctx) -> HReal {
    let k = target.theta_k().expect("theta target") as i64;
    let factor = match target {
        Target::T11 { .. } => 2 * (k + 1),
        Target::T12 { .. } => (1 << k) + 1,
        _ => k + 2,
    };
    ctx.w.mul_int(factor)
}

/// t^{−1} coefficient S^{−1/2} e^{v²/(4S)} (D_{−1}(−x) − D_{−1}(x)), x = v/√S:
/// the residue at s = 1 of the Mellin transform.
fn residue_coefficient(s: &HReal, ctx: &Ctx) -> Result<HReal, AsymError> {
    let hp = &ctx.hp;
    let root = hp.sqrt(s)?;
    let x = &ctx.v / &root;
    let pre = hp.exp(&(&ctx.v.square() / &s.mul_int(4)))?;
    let diff = &hp.pcf_dm1(&(-&x))? - &hp.pcf_dm1(&x)?;
    Ok(&(&pre * &diff) / &root)
}

/// Displayed erf form c·√(π/(a·w))·e^{v²/(b·w)}·erf(v/√(e·w)) with the
/// constants supplied by the caller: returns √(π/A)·e^{v²/B}·erf(v/√E).
fn erf_form(a: &HReal, b: &HReal, e: &HReal, ctx: &Ctx) -> Result<HReal, AsymError> {
    let hp = &ctx.hp;
    let root = hp.sqrt(&(&hp.pi() / a))?;
    let pre = hp.exp(&(&ctx.v.square() / b))?;
    let arg = &ctx.v / &hp.sqrt(e)?;
    Ok(&(&root * &pre) * &hp.erf(&arg)?)
}

/// Coefficient of t^n (n odd) after the parity collapse:
/// 2·S^{n/2}/n!·ζ(−n)·pre·D_n(v/√S), with pre = e^{v²/(4S)} unless overridden.
fn collapsed_coefficient(
    s: &HReal,
    n: usize,
    pre: &HReal,
    ctx: &Ctx,
) -> Result<(HReal, BigRational), AsymError> {
    let hp = &ctx.hp;
    let zeta = zeta_neg(n);
    let x = &ctx.v / &hp.sqrt(s)?;
    let mag = -ctx.scaled_power(s, n)?; // (−1)^n = −1 for odd n
    let c = &(&(&mag * &ctx.rat(&zeta)) * pre) * &hp.pcf_d(n, &x)?;
    Ok((c.mul_int(2), zeta))
}

/// The same coefficient assembled from the two displayed sums,
/// S^{n/2}(−1)^n/n!·ζ(−n)·e^{v²/(4S)}·(D_n(−x) − D_n(x)), for any n ≥ 0.
/// Even n cancels; used to check the parity collapse numerically.
pub fn two_sum_coefficient(
    target: &Target,
    v: &BigRational,
    w: &BigRational,
    n: usize,
    prec: &Precision,
) -> Result<HReal, AsymError> {
    if target.theta_k().is_none() {
        return Err(AsymError::Params(format!("{target} has no two-sum form")));
    }
    let req = ExpansionRequest::new(*target, v.clone(), w.clone(), 0, "proof");
    let ctx = Ctx::new(&req, prec);
    let hp = &ctx.hp;
    let s = theta_scale(target, &ctx);
    let x = &ctx.v / &hp.sqrt(&s)?;
    let pre = hp.exp(&(&ctx.v.square() / &s.mul_int(4)))?;
    let diff = &hp.pcf_d(n, &(-&x))? - &hp.pcf_d(n, &x)?;
    let c = &(&(&ctx.scaled_power(&s, n)? * &ctx.rat(&zeta_neg(n))) * &pre) * &diff;
    Ok(prec.round(&c))
}

fn theta_terms(req: &ExpansionRequest, ctx: &Ctx) -> Result<Vec<ExpansionTerm>, AsymError> {
    let hp = &ctx.hp;
    let target = &req.target;
    let k = target.theta_k().unwrap() as i64;
    let s = theta_scale(target, ctx);
    let variant = req.variant.as_str();
    let mut terms = Vec::new();

    if !vanishes(req, -1)? {
        let w = &ctx.w;
        let coeff = match (target, variant) {
            (_, "proof") | (Target::T12 { .. }, "statement-exp") => residue_coefficient(&s, ctx)?,
            // √(π/(4w(k+1))) e^{v²/(4(k+1)w)} · 2 erf(v/(2√((k+1)w)))
            (Target::T11 { .. }, _) => {
                let a = w.mul_int(k + 1);
                erf_form(&a, &a.mul_int(4), &a.mul_int(4), ctx)?
            }
            // √(π/(4w(2^k+1))) e^{v²/(4(2^k+1)w)} · 2 erf(v/(2√((2^k+1)w)))
            (Target::T12 { .. }, _) => {
                let a = w.mul_int((1 << k) + 1);
                erf_form(&a, &a.mul_int(4), &a.mul_int(4), ctx)?
            }
            // √(π/(2w(k+2))) e^{v²/(2(k+2)w)} · 2 erf(v/(2√((k+2)w)))
            _ => {
                let a = w.mul_int(k + 2);
                erf_form(&a.mul_pow2(-1), &a.mul_int(2), &a.mul_int(4), ctx)?
            }
        };
        terms.push(ExpansionTerm {
            power: -1,
            coeff,
            kind: TermKind::ErfResidue,
            exact_part: None,
        });
    }

    let pre = match (target, variant) {
        (Target::T12 { .. }, "statement") | (Target::T12 { .. }, "statement-exp") => {
            hp.exp(&(&ctx.v.square() / &ctx.w.mul_int(4 * (k + 1))))?
        }
        _ => hp.exp(&(&ctx.v.square() / &s.mul_int(4)))?,
    };
    for n in 0..=req.order {
        if vanishes(req, n as i32)? {
            continue;
        }
        let (coeff, zeta) = if target == &(Target::T11 { k: k as usize }) && variant == "statement" {
            // as displayed: both D_n sums, without using parity
            let x = &ctx.v / &hp.sqrt(&s)?;
            let diff = &hp.pcf_d(n, &(-&x))? - &hp.pcf_d(n, &x)?;
            let zeta = zeta_neg(n);
            let c = &(&(&ctx.scaled_power(&s, n)? * &ctx.rat(&zeta)) * &pre) * &diff;
            (c, zeta)
        } else {
            collapsed_coefficient(&s, n, &pre, ctx)?
        };
        terms.push(ExpansionTerm {
            power: n as i32,
            coeff,
            kind: TermKind::ZetaDn,
            exact_part: Some(zeta),
        });
    }
    Ok(terms)
}

fn t14_terms(req: &ExpansionRequest, d: i64, ctx: &Ctx) -> Result<Vec<ExpansionTerm>, AsymError> {
    let hp = &ctx.hp;
    let chi = CharacterSpec::new(d)?;
    let two_w = ctx.w.mul_int(2);
    let pre = hp.exp(&(&ctx.v.square() / &ctx.w.mul_int(8)))?;
    let x = &ctx.v / &hp.sqrt(&two_w)?;
    let mut terms = Vec::new();
    for n in 0..=req.order {
        if vanishes(req, n as i32)? {
            continue;
        }
        let l = l_chi_neg(&chi, n);
        let c = &(&(&ctx.scaled_power(&two_w, n)? * &ctx.rat(&l)) * &pre) * &hp.pcf_d(n, &x)?;
        terms.push(ExpansionTerm {
            power: n as i32,
            coeff: c,
            kind: TermKind::LchiDn,
            exact_part: Some(l),
        });
    }
    Ok(terms)
}

fn f14_terms(req: &ExpansionRequest, k: usize, ctx: &Ctx) -> Result<Vec<ExpansionTerm>, AsymError> {
    let hp = &ctx.hp;
    let km1 = k as i64 - 1;
    let lambda = ctx.w.mul_int(2 * km1);
    let pre = hp.exp(&(&ctx.v.square().mul_int(km1) / &ctx.w.mul_int(2)))?;
    let y = &ctx.v.mul_int(2 * km1) / &hp.sqrt(&lambda)?;
    let sign = if req.variant == "printed" { 1 } else { -1 };
    let mut terms = Vec::new();
    for n in 0..=req.order {
        if vanishes(req, n as i32)? {
            continue;
        }
        // (1 − 2^{1+n}) ζ(−n)
        let alt = (BigRational::one() - BigRational::from_integer(BigInt::one() << (n + 1))) * zeta_neg(n);
        let c = &(&(&ctx.scaled_power(&lambda, n)? * &ctx.rat(&alt)) * &pre) * &hp.pcf_d(n, &y)?;
        terms.push(ExpansionTerm {
            power: n as i32,
            coeff: c.mul_int(sign),
            kind: TermKind::FkTerm,
            exact_part: Some(alt),
        });
    }
    Ok(terms)
}

fn ol_terms(req: &ExpansionRequest, l: i64, m: i64, k: usize, ctx: &Ctx) -> Result<Vec<ExpansionTerm>, AsymError> {
    let mut terms = Vec::new();
    let one_minus_k = BigRational::from_integer(BigInt::from(1 - k as i64));
    for n in 0..=req.order {
        if vanishes(req, n as i32)? {
            continue;
        }
        let lv = lm_value(l, m, n)?;
        let exact = &lv * num_traits::pow(one_minus_k.clone(), n) / BigRational::from_integer(factorial(n));
        terms.push(ExpansionTerm {
            power: n as i32,
            coeff: ctx.rat(&exact),
            kind: TermKind::OlTerm,
            exact_part: Some(lv),
        });
    }
    Ok(terms)
}

/// Assembles the truncated expansion of `req.target` through `t^M`.
pub fn build_expansion(req: &ExpansionRequest, prec: &Precision) -> Result<ExpansionSpec, AsymError> {
    req.validate()?;
    let ctx = Ctx::new(req, prec);
    let mut terms = match req.target {
        Target::T11 { .. } | Target::T12 { .. } | Target::T13 { .. } => theta_terms(req, &ctx)?,
        Target::T14 { d } => t14_terms(req, d, &ctx)?,
        Target::F14 { k } => f14_terms(req, k, &ctx)?,
        Target::Ol { l, m, k } => ol_terms(req, l, m, k, &ctx)?,
    };
    for t in &mut terms {
        t.coeff = ctx.prec.round(&t.coeff);
    }
    let mut next_power = None;
    for p in (req.order as i32 + 1)..=(req.order as i32 + NEXT_POWER_SEARCH) {
        if !vanishes(req, p)? {
            next_power = Some(p);
            break;
        }
    }
    Ok(ExpansionSpec {
        request: req.clone(),
        terms,
        next_power,
    })
}

/// Σ coeff·t^power.
pub fn eval_truncation(spec: &ExpansionSpec, t: &HReal) -> HReal {
    let bits = spec
        .terms
        .iter()
        .map(|term| term.coeff.bits())
        .max()
        .unwrap_or(t.bits())
        .max(t.bits());
    let t = t.with_bits(bits);
    let mut sum = HReal::zero(bits);
    for term in &spec.terms {
        let tp = if term.power < 0 {
            t.powi(term.power.unsigned_abs()).recip()
        } else {
            t.powi(term.power as u32)
        };
        sum = &sum + &(&term.coeff * &tp);
    }
    sum
}

/// The target's left-hand side at `t`.
pub fn lhs_value(
    target: &Target,
    v: &BigRational,
    w: &BigRational,
    t: &HReal,
    prec: &Precision,
) -> Result<HReal, AsymError> {
    let vh = prec.rational(v);
    let wh = prec.rational(w);
    Ok(match *target {
        Target::T11 { k } => series_eval::eval_theta_diff(Family::A, k, t, &vh, &wh, prec)?,
        Target::T12 { k } => series_eval::eval_theta_diff(Family::B, k, t, &vh, &wh, prec)?,
        Target::T13 { k } => series_eval::eval_theta_diff(Family::C, k, t, &vh, &wh, prec)?,
        Target::T14 { d } => series_eval::eval_theta_chi(&CharacterSpec::new(d)?, t, &vh, &wh, prec)?,
        Target::F14 { k } => series_eval::eval_fk_minus_one(k, t, &vh, &wh, prec)?,
        Target::Ol { l, m, k } => series_eval::eval_theta_ol(l, m, k, t, prec)?,
    })
}

/// t = 2^{−a}, …, 2^{−b}.
pub fn pow2_grid(a: u32, b: u32) -> Vec<BigRational> {
    (a..=b)
        .map(|e| BigRational::new(BigInt::one(), BigInt::one() << e as usize))
        .collect()
}

/// Default slope grid 2^{−4} … 2^{−10}.
pub fn default_grid() -> Vec<BigRational> {
    pow2_grid(4, 10)
}

fn validate_grid(grid: &[BigRational]) -> Result<(), AsymError> {
    if grid.len() < 5 {
        return Err(AsymError::Grid(format!("need at least 5 points, got {}", grid.len())));
    }
    let eighth = BigRational::new(1.into(), 8.into());
    for t in grid {
        if !t.is_positive() || *t > eighth {
            return Err(AsymError::Grid(format!("point {t} outside (0, 1/8]")));
        }
    }
    let ratio = &grid[1] / &grid[0];
    if ratio == BigRational::one() || grid.windows(2).any(|p| &p[1] / &p[0] != ratio) {
        return Err(AsymError::Grid("points must form a geometric progression".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub t: BigRational,
    pub lhs: HReal,
    pub truncation: HReal,
    pub remainder: HReal,
}

#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub spec: ExpansionSpec,
    pub grid: Vec<BigRational>,
    pub points: Vec<GridPoint>,
    /// Least-squares slope of log R_M against log t; `None` when degenerate.
    pub slope: Option<HReal>,
    pub expected: Option<i32>,
    pub pass: bool,
    /// Left side identically zero and no nonzero coefficients.
    pub degenerate: bool,
}

impl SlopeReport {
    /// |slope − expected|, when both exist.
    pub fn miss(&self) -> Option<HReal> {
        let slope = self.slope.as_ref()?;
        let expected = self.expected?;
        Some((slope - &HReal::from_int(expected as i64, slope.bits())).abs())
    }
}

/// Fits the empirical order of R_M(t) = |LHS(t) − S_M(t)| on `grid`.
pub fn remainder_slope(
    req: &ExpansionRequest,
    grid: &[BigRational],
    prec: &Precision,
) -> Result<SlopeReport, AsymError> {
    validate_grid(grid)?;
    let spec = build_expansion(req, prec)?;
    let points: Vec<GridPoint> = grid
        .par_iter()
        .map(|t| -> Result<GridPoint, AsymError> {
            let th = prec.rational(t);
            let lhs = lhs_value(&req.target, &req.v, &req.w, &th, prec)?;
            let truncation = prec.round(&eval_truncation(&spec, &th));
            let remainder = (&lhs - &truncation).abs();
            Ok(GridPoint {
                t: t.clone(),
                lhs,
                truncation,
                remainder,
            })
        })
        .collect::<Result<_, _>>()?;

    if spec.terms.is_empty() && points.iter().all(|p| p.lhs.is_zero()) {
        return Ok(SlopeReport {
            spec,
            grid: grid.to_vec(),
            points,
            slope: None,
            expected: None,
            pass: true,
            degenerate: true,
        });
    }
    let expected = spec.next_power.ok_or(AsymError::NoNextPower(req.order))?;
    let floor_exp = -(prec.digits() as i64) + STARVATION_DIGITS;
    let floor = prec.pow10(floor_exp);
    for p in &points {
        if p.remainder.cmp_value(&floor).is_lt() {
            return Err(AsymError::PrecisionStarvation {
                t: p.t.to_string(),
                remainder: p.remainder.to_decimal(6),
                floor_exp,
            });
        }
    }

    let xs: Vec<HReal> = points
        .iter()
        .map(|p| prec.ln(&prec.rational(&p.t)))
        .collect::<Result<_, _>>()?;
    let ys: Vec<HReal> = points
        .iter()
        .map(|p| prec.ln(&p.remainder))
        .collect::<Result<_, _>>()?;
    let slope = least_squares_slope(&xs, &ys, prec);
    let tol = prec.ratio(SLOPE_TOLERANCE.0, SLOPE_TOLERANCE.1);
    let pass = (&slope - &prec.int(expected as i64)).abs().cmp_value(&tol).is_le();
    Ok(SlopeReport {
        spec,
        grid: grid.to_vec(),
        points,
        slope: Some(slope),
        expected: Some(expected),
        pass,
        degenerate: false,
    })
}

fn least_squares_slope(xs: &[HReal], ys: &[HReal], prec: &Precision) -> HReal {
    let n = xs.len() as i64;
    let mean = |v: &[HReal]| v.iter().fold(prec.int(0), |a, b| &a + b).div_int(n);
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = prec.int(0);
    let mut sxx = prec.int(0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - &mx;
        sxy = &sxy + &(&dx * &(y - &my));
        sxx = &sxx + &dx.square();
    }
    &sxy / &sxx
}

#[derive(Debug, Clone)]
pub struct Arbitration {
    pub target: Target,
    pub reports: Vec<SlopeReport>,
    pub winner: Option<String>,
    /// Smallest miss among the losers, when there is a winner.
    pub margin: Option<HReal>,
}

/// Runs [`remainder_slope`] for each listed variant. A winner passes while
/// every other variant misses the expected exponent by at least 1.
pub fn arbitrate_variants(
    base: &ExpansionRequest,
    variants: &[&str],
    grid: &[BigRational],
    prec: &Precision,
) -> Result<Arbitration, AsymError> {
    if variants.len() < 2 {
        return Err(AsymError::TooFewVariants);
    }
    let reports: Vec<SlopeReport> = variants
        .iter()
        .map(|v| remainder_slope(&base.with_variant(v), grid, prec))
        .collect::<Result<_, _>>()?;
    let margin_needed = prec.int(LOSER_MARGIN);
    let mut winner = None;
    let mut margin = None;
    let passing: Vec<usize> = (0..reports.len()).filter(|&i| reports[i].pass).collect();
    if let [only] = passing[..] {
        let misses: Option<Vec<HReal>> = reports
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != only)
            .map(|(_, r)| r.miss())
            .collect();
        if let Some(misses) = misses {
            let smallest = misses
                .into_iter()
                .reduce(|a, b| if a.cmp_value(&b).is_le() { a } else { b })
                .expect("at least one loser");
            if smallest.cmp_value(&margin_needed).is_ge() {
                winner = Some(variants[only].to_string());
                margin = Some(smallest);
            }
        }
    }
    Ok(Arbitration {
        target: base.target,
        reports,
        winner,
        margin,
    })
}

/// Arbitration over every registered variant of `base.target`.
pub fn arbitrate(base: &ExpansionRequest, grid: &[BigRational], prec: &Precision) -> Result<Arbitration, AsymError> {
    arbitrate_variants(base, registered_variants(&base.target), grid, prec)
}
