//! Serializable verification reports.
//!
//! Reports hold decimal strings only, with map fields in `BTreeMap`s, so the
//! same invocation always renders to the same bytes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::asym::{Arbitration, SlopeReport};
use crate::hpreal::{HReal, Precision};
use crate::qformal::{BaileyCheck, FamilyArbitration, IdentityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "PASS-degenerate")]
    PassDegenerate,
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass | Outcome::PassDegenerate)
    }

    fn from_bool(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::PassDegenerate => "PASS-degenerate",
        })
    }
}

/// Where a formal check first disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Locator {
    /// Pair index, for Bailey-relation checks.
    pub n: Option<usize>,
    pub q_exp: usize,
    pub z_exp: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantRow {
    pub variant: String,
    pub outcome: Outcome,
    pub slope: Option<String>,
    pub expected: Option<i32>,
    pub first_mismatch: Option<Locator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRow {
    pub variant: String,
    pub power: i32,
    pub kind: String,
    pub exact: Option<String>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRow {
    pub variant: String,
    pub t: String,
    pub lhs: String,
    pub truncation: String,
    pub remainder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub target: String,
    pub params: BTreeMap<String, String>,
    pub variant: String,
    pub precision: Option<u32>,
    pub order: usize,
    pub grid: Vec<String>,
    pub outcome: Outcome,
    pub winner: Option<String>,
    pub margin: Option<String>,
    pub variants: Vec<VariantRow>,
    pub terms: Vec<TermRow>,
    pub points: Vec<PointRow>,
}

fn dec(x: &HReal, prec: &Precision) -> String {
    x.to_decimal(prec.digits() as usize)
}

fn identity_row(r: &IdentityReport) -> VariantRow {
    VariantRow {
        variant: r.variant.clone(),
        outcome: Outcome::from_bool(r.passed()),
        slope: None,
        expected: None,
        first_mismatch: r.mismatch.as_ref().map(|m| Locator {
            n: None,
            q_exp: m.q_exp,
            z_exp: m.z_exp,
            lhs: m.lhs_coeff.clone(),
            rhs: m.rhs_coeff.clone(),
        }),
    }
}

fn slope_rows(r: &SlopeReport, prec: &Precision) -> (VariantRow, Vec<TermRow>, Vec<PointRow>) {
    let variant = r.spec.request.variant.clone();
    let outcome = if r.degenerate {
        Outcome::PassDegenerate
    } else {
        Outcome::from_bool(r.pass)
    };
    let row = VariantRow {
        variant: variant.clone(),
        outcome,
        slope: r.slope.as_ref().map(|s| s.to_decimal(8)),
        expected: r.expected,
        first_mismatch: None,
    };
    let terms = r
        .spec
        .terms
        .iter()
        .map(|t| TermRow {
            variant: variant.clone(),
            power: t.power,
            kind: t.kind.to_string(),
            exact: t.exact_part.as_ref().map(|q| q.to_string()),
            coeff: dec(&t.coeff, prec),
        })
        .collect();
    let points = r
        .points
        .iter()
        .map(|p| PointRow {
            variant: variant.clone(),
            t: p.t.to_string(),
            lhs: dec(&p.lhs, prec),
            truncation: dec(&p.truncation, prec),
            remainder: dec(&p.remainder, prec),
        })
        .collect();
    (row, terms, points)
}

fn expansion_params(r: &SlopeReport) -> BTreeMap<String, String> {
    let req = &r.spec.request;
    let mut params: BTreeMap<String, String> = req
        .target
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    if req.target.uses_vw() {
        params.insert("v".into(), req.v.to_string());
        params.insert("w".into(), req.w.to_string());
    }
    params
}

fn grid_strings(grid: &[BigRational]) -> Vec<String> {
    grid.iter().map(|t| t.to_string()).collect()
}

impl VerificationReport {
    pub fn from_identity(r: &IdentityReport) -> Self {
        let row = identity_row(r);
        Self {
            command: "verify".into(),
            target: format!("family-{}", r.family),
            params: BTreeMap::from([("k".to_string(), r.k.to_string())]),
            variant: r.variant.clone(),
            precision: None,
            order: r.order,
            grid: Vec::new(),
            outcome: row.outcome,
            winner: None,
            margin: None,
            variants: vec![row],
            terms: Vec::new(),
            points: Vec::new(),
        }
    }

    /// PASS with a winner when exactly one variant passes, FAIL when none
    /// does, INCONCLUSIVE otherwise.
    pub fn from_family_arbitration(a: &FamilyArbitration) -> Self {
        let rows: Vec<VariantRow> = a.reports.iter().map(identity_row).collect();
        let passing = rows.iter().filter(|r| r.outcome.is_pass()).count();
        let outcome = match (passing, &a.winner) {
            (_, Some(_)) => Outcome::Pass,
            (0, None) => Outcome::Fail,
            _ => Outcome::Inconclusive,
        };
        Self {
            command: "verify".into(),
            target: format!("family-{}", a.family),
            params: BTreeMap::from([("k".to_string(), a.k.to_string())]),
            variant: "all".into(),
            precision: None,
            order: a.order,
            grid: Vec::new(),
            outcome,
            winner: a.winner.clone(),
            margin: None,
            variants: rows,
            terms: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn from_bailey(c: &BaileyCheck, chain: &str, k: usize) -> Self {
        let row = VariantRow {
            variant: c.label.clone(),
            outcome: Outcome::from_bool(c.passed()),
            slope: None,
            expected: None,
            first_mismatch: c.failure.as_ref().map(|f| Locator {
                n: Some(f.n),
                q_exp: f.q_exp,
                z_exp: f.z_exp,
                lhs: f.beta.clone(),
                rhs: f.alpha_sum.clone(),
            }),
        };
        Self {
            command: "bailey".into(),
            target: format!("chain-{chain}"),
            params: BTreeMap::from([
                ("k".to_string(), k.to_string()),
                ("n_max".to_string(), c.n_max.to_string()),
            ]),
            variant: c.label.clone(),
            precision: None,
            order: c.order,
            grid: Vec::new(),
            outcome: row.outcome,
            winner: None,
            margin: None,
            variants: vec![row],
            terms: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn from_slope(r: &SlopeReport, prec: &Precision) -> Self {
        let (row, terms, points) = slope_rows(r, prec);
        let req = &r.spec.request;
        Self {
            command: "expand".into(),
            target: req.target.name().into(),
            params: expansion_params(r),
            variant: req.variant.clone(),
            precision: Some(prec.digits()),
            order: req.order,
            grid: grid_strings(&r.grid),
            outcome: row.outcome,
            winner: None,
            margin: None,
            variants: vec![row],
            terms,
            points,
        }
    }

    /// PASS with a winner, INCONCLUSIVE otherwise.
    pub fn from_arbitration(a: &Arbitration, prec: &Precision) -> Self {
        let first = a.reports.first().expect("arbitration has reports");
        let mut variants = Vec::new();
        let mut terms = Vec::new();
        let mut points = Vec::new();
        for r in &a.reports {
            let (row, t, p) = slope_rows(r, prec);
            variants.push(row);
            terms.extend(t);
            points.extend(p);
        }
        Self {
            command: "expand".into(),
            target: a.target.name().into(),
            params: expansion_params(first),
            variant: "all".into(),
            precision: Some(prec.digits()),
            order: first.spec.request.order,
            grid: grid_strings(&first.grid),
            outcome: if a.winner.is_some() {
                Outcome::Pass
            } else {
                Outcome::Inconclusive
            },
            winner: a.winner.clone(),
            margin: a.margin.as_ref().map(|m| m.to_decimal(8)),
            variants,
            terms,
            points,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Fixed columns: target, params…, variant, then either
    /// t, lhs, truncation, remainder, slope, expected, pass (expansions) or
    /// order, n, q_exp, z_exp, lhs, rhs, pass (formal checks).
    pub fn to_csv(&self) -> String {
        let param_names: Vec<&String> = self.params.keys().collect();
        let param_values: Vec<&String> = self.params.values().collect();
        let mut out = String::new();
        let mut header = vec!["target".to_string()];
        header.extend(param_names.iter().map(|s| s.to_string()));
        header.push("variant".into());
        let prefix = |variant: &str| -> Vec<String> {
            let mut v = vec![self.target.clone()];
            v.extend(param_values.iter().map(|s| s.to_string()));
            v.push(variant.to_string());
            v
        };
        if self.command == "expand" {
            header.extend(
                ["t", "lhs", "truncation", "remainder", "slope", "expected", "pass"].map(String::from),
            );
            writeln!(out, "{}", csv_line(&header)).unwrap();
            for p in &self.points {
                let row = self.variants.iter().find(|r| r.variant == p.variant);
                let mut cells = prefix(&p.variant);
                cells.extend([p.t.clone(), p.lhs.clone(), p.truncation.clone(), p.remainder.clone()]);
                cells.push(row.and_then(|r| r.slope.clone()).unwrap_or_default());
                cells.push(row.and_then(|r| r.expected).map(|e| e.to_string()).unwrap_or_default());
                cells.push(row.map(|r| r.outcome.is_pass().to_string()).unwrap_or_default());
                writeln!(out, "{}", csv_line(&cells)).unwrap();
            }
        } else {
            header.extend(["order", "n", "q_exp", "z_exp", "lhs", "rhs", "pass"].map(String::from));
            writeln!(out, "{}", csv_line(&header)).unwrap();
            for r in &self.variants {
                let mut cells = prefix(&r.variant);
                cells.push(self.order.to_string());
                match &r.first_mismatch {
                    Some(m) => cells.extend([
                        m.n.map(|n| n.to_string()).unwrap_or_default(),
                        m.q_exp.to_string(),
                        m.z_exp.to_string(),
                        m.lhs.clone(),
                        m.rhs.clone(),
                    ]),
                    None => cells.extend(std::iter::repeat_n(String::new(), 5)),
                }
                cells.push(r.outcome.is_pass().to_string());
                writeln!(out, "{}", csv_line(&cells)).unwrap();
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "{} {} [{}] variant={}", self.command, self.target, params.join(" "), self.variant).unwrap();
        match self.precision {
            Some(p) => writeln!(out, "order={} precision={p}", self.order).unwrap(),
            None => writeln!(out, "order={}", self.order).unwrap(),
        }
        if !self.grid.is_empty() {
            writeln!(out, "grid: {}", self.grid.join(" ")).unwrap();
        }
        for r in &self.variants {
            write!(out, "  {:<16} {}", r.variant, r.outcome).unwrap();
            if let Some(s) = &r.slope {
                write!(out, "  slope={s}").unwrap();
            }
            if let Some(e) = r.expected {
                write!(out, " expected={e}").unwrap();
            }
            if let Some(m) = &r.first_mismatch {
                let at = match m.n {
                    Some(n) => format!("n={n} "),
                    None => String::new(),
                };
                write!(out, "  first mismatch {at}q^{} z^{}: {} vs {}", m.q_exp, m.z_exp, m.lhs, m.rhs).unwrap();
            }
            out.push('\n');
        }
        if !self.terms.is_empty() {
            writeln!(out, "terms:").unwrap();
            for t in &self.terms {
                let exact = t.exact.as_deref().unwrap_or("-");
                writeln!(out, "  [{}] t^{:<3} {:<12} exact={:<12} coeff={}", t.variant, t.power, t.kind, exact, t.coeff)
                    .unwrap();
            }
        }
        if !self.points.is_empty() {
            writeln!(out, "points:").unwrap();
            for p in &self.points {
                writeln!(out, "  [{}] t={} R={}", p.variant, p.t, p.remainder).unwrap();
            }
        }
        if let Some(w) = &self.winner {
            write!(out, "winner: {w}").unwrap();
            if let Some(m) = &self.margin {
                write!(out, " (margin {m})").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "outcome: {}", self.outcome).unwrap();
        out
    }
}

fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}
