//! Arbitrary-precision reals and the special functions the expansions need.
//!
//! Every function takes its working precision from a [`Precision`]: P decimal
//! digits plus G guard digits, carried internally as binary mantissa bits.

mod functions;
mod real;

pub use real::HReal;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HpError {
    #[error("{func}: argument {arg} outside supported range |x| <= {limit}")]
    Range {
        func: &'static str,
        arg: String,
        limit: String,
    },
    #[error("{func}: argument must be positive")]
    Domain { func: &'static str },
    #[error("cannot parse '{0}' as a decimal or rational number")]
    Parse(String),
    #[error("precision must be at least {min} digits, got {got}")]
    TooFewDigits { min: u32, got: u32 },
}

/// Parses a decimal (`-1.25e-3`) or a ratio (`-3/8`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<num_rational::BigRational, HpError> {
    real::parse_rational(s).ok_or_else(|| HpError::Parse(s.to_string()))
}

pub const MIN_DIGITS: u32 = 30;
pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_GUARD: u32 = 10;

/// Working precision: `digits` decimal digits promised to callers, `guard`
/// extra digits carried internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
    guard: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            digits: DEFAULT_DIGITS,
            guard: DEFAULT_GUARD,
        }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self, HpError> {
        Self::with_guard(digits, DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self, HpError> {
        if digits < MIN_DIGITS {
            return Err(HpError::TooFewDigits {
                min: MIN_DIGITS,
                got: digits,
            });
        }
        Ok(Self { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Mantissa bits for P + G decimal digits.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4
    }

    /// Context with `extra` more digits, keeping the guard.
    pub fn raised(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
            guard: self.guard,
        }
    }

    pub fn int(&self, v: i64) -> HReal {
        HReal::from_int(v, self.bits())
    }

    pub fn rational(&self, q: &num_rational::BigRational) -> HReal {
        HReal::from_rational(q, self.bits())
    }

    /// Exact ratio n/d rounded to this precision.
    pub fn ratio(&self, n: i64, d: i64) -> HReal {
        self.rational(&num_rational::BigRational::new(n.into(), d.into()))
    }

    /// 10^e for any integer e.
    pub fn pow10(&self, e: i64) -> HReal {
        use num_bigint::BigInt;
        let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
        let q = if e >= 0 {
            num_rational::BigRational::from_integer(p)
        } else {
            num_rational::BigRational::new(BigInt::from(1), p)
        };
        self.rational(&q)
    }

    pub fn parse(&self, s: &str) -> Result<HReal, HpError> {
        HReal::parse(s, self.bits())
    }

    /// Brings `x` to this context's mantissa width.
    pub fn round(&self, x: &HReal) -> HReal {
        x.with_bits(self.bits())
    }
}
