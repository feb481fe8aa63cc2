//! Exact truncated q-series over Laurent polynomials in `z`, Bailey pairs
//! and chains, and the coefficient-by-coefficient identity checks.

mod bailey;
mod identity;
mod laurent;
mod pochhammer;
mod series;

pub use bailey::{bailey_check, chain_apply, seed_pair, BaileyCheck, BaileyPair, Chain};
pub use identity::{
    arbitrate_family, arbitrate_family_b, multisum_lhs, multisum_lhs_brute, registered_variants, theta_rhs,
    verify_identity, FamilyArbitration, IdentityReport, Mismatch,
};
pub use laurent::LaurentPoly;
pub use pochhammer::{inv_pochhammer, pochhammer, QMonomial};
pub use series::LaurentQSeries;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("leading coefficient {0} is not a unit monomial")]
    NonUnitLeading(String),
    #[error("unknown variant '{variant}' for family {family}")]
    UnknownVariant { family: Family, variant: String },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("chain {chain} cannot act on a pair relative to a = q^{a_exp}, base q^{base_exp}")]
    IncompatibleBase {
        chain: Chain,
        a_exp: usize,
        base_exp: usize,
    },
}

/// The three multi-sum families built from the seed pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            other => Err(QError::UnknownFamily(other.to_string())),
        }
    }
}
