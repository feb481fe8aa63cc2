//! Exact and numerical verification of Bailey-chain q-series identities and
//! the small-`t` asymptotic expansions of the partial theta functions they
//! produce.
//!
//! The crate is split into:
//!
//! - [`exact`]: Bernoulli numbers, ζ(−n), Hurwitz ζ(−n, x), real primitive
//!   characters and L(−n, χ), all over exact rationals.
//! - [`qformal`]: truncated q-series with Laurent-polynomial coefficients in
//!   `z`, Bailey pairs and chains, and coefficient-exact identity checks.
//! - [`hpreal`]: arbitrary-precision reals with exp, erf, π, Hermite and
//!   parabolic cylinder functions.
//! - [`series_eval`]: direct high-precision evaluation of the theta sums and
//!   the nested multi-sums.
//! - [`asym`]: truncated asymptotic expansions, remainder slopes and
//!   arbitration between competing constant variants.
//! - [`report`]: serializable verification reports.

pub mod asym;
pub mod cache;
pub mod exact;
pub mod hpreal;
pub mod qformal;
pub mod report;
pub mod series_eval;

pub use exact::{BigRational, CharacterSpec};
pub use hpreal::{HReal, Precision};
pub use qformal::{Family, LaurentPoly, LaurentQSeries};
