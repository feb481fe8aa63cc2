use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::HpError;

/// A binary floating-point number `mantissa · 2^exponent` whose mantissa is
/// kept to at most `bits` significant bits (round half away from zero).
///
/// There is deliberately no `PartialEq`: callers compare against an explicit
/// tolerance, or use [`HReal::cmp_value`] for an exact ordering.
#[derive(Debug, Clone)]
pub struct HReal {
    mant: BigInt,
    exp: i64,
    bits: u32,
}

pub(crate) fn round_mantissa(mant: BigInt, exp: i64, bits: u32) -> (BigInt, i64) {
    let len = mant.bits();
    if len <= bits as u64 {
        return (mant, exp);
    }
    let mut shift = len - bits as u64;
    let negative = mant.is_negative();
    let mut mag = mant.abs();
    mag += BigInt::one() << (shift - 1);
    mag >>= shift;
    if mag.bits() > bits as u64 {
        mag >>= 1;
        shift += 1;
    }
    let m = if negative { -mag } else { mag };
    (m, exp + shift as i64)
}

impl HReal {
    pub(crate) fn from_parts(mant: BigInt, exp: i64, bits: u32) -> Self {
        if mant.is_zero() {
            return Self::zero(bits);
        }
        let (mant, exp) = round_mantissa(mant, exp, bits);
        Self { mant, exp, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
            bits,
        }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Self::from_parts(BigInt::from(v), 0, bits)
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> Self {
        Self::from_parts(v.clone(), 0, bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        if q.is_zero() {
            return Self::zero(bits);
        }
        let num = q.numer();
        let den = q.denom();
        let shift = bits as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.max(0);
        let scaled = num << shift as usize;
        let quot = scaled / den;
        Self::from_parts(quot, -shift, bits)
    }

    /// Parses `[-]digits[.digits][e[-]digits]` or `[-]int/int`.
    pub fn parse(s: &str, bits: u32) -> Result<Self, HpError> {
        parse_rational(s)
            .map(|q| Self::from_rational(&q, bits))
            .ok_or_else(|| HpError::Parse(s.to_string()))
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
            bits: self.bits,
        }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// floor(log2|x|) for nonzero x.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Nearest f64 (saturating to ±0 / ±inf outside the f64 range).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let shift = (len - 60).max(0);
        let top = (&self.mant >> shift as usize).to_string().parse::<f64>().unwrap();
        let e = self.exp + shift;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0 * top.signum();
        }
        top * 2f64.powi(e as i32)
    }

    /// The value times 2^k, exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::from_parts(&self.mant * BigInt::from(k), self.exp, self.bits)
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        self / &Self::from_int(k, self.bits)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::from_int(1, self.bits);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            base = base.square();
            n >>= 1;
        }
        result
    }

    pub fn recip(&self) -> Self {
        &Self::from_int(1, self.bits) / self
    }

    pub fn sqrt(&self) -> Result<Self, HpError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.is_negative() {
            return Err(HpError::Domain { func: "sqrt" });
        }
        let target = 2 * self.bits as i64 + 4;
        let mut shift = (target - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let root = m.sqrt();
        Ok(Self::from_parts(root, (self.exp - shift) / 2, self.bits))
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }

    pub fn max_bits(&self, other: &Self) -> u32 {
        self.bits.max(other.bits)
    }

    /// |self − other| ≤ tol.
    pub fn close_to(&self, other: &Self, tol: &Self) -> bool {
        (self - other).abs().cmp_value(tol) != Ordering::Greater
    }

    /// Rounds to the integer nearest the value (ties away from zero).
    pub fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        let sh = (-self.exp) as usize;
        let neg = self.mant.is_negative();
        let mag = (self.mant.abs() + (BigInt::one() << (sh - 1))) >> sh;
        if neg {
            -mag
        } else {
            mag
        }
    }

    /// Fixed-point image round(x · 2^frac_bits).
    pub(crate) fn to_fixed(&self, frac_bits: u64) -> BigInt {
        let total = self.exp + frac_bits as i64;
        if total >= 0 {
            &self.mant << total as usize
        } else {
            let sh = (-total) as usize;
            let neg = self.mant.is_negative();
            let mag = (self.mant.abs() + (BigInt::one() << (sh - 1))) >> sh;
            if neg {
                -mag
            } else {
                mag
            }
        }
    }

    pub(crate) fn from_fixed(v: BigInt, frac_bits: u64, bits: u32) -> Self {
        Self::from_parts(v, -(frac_bits as i64), bits)
    }

    /// Scientific notation with exactly `digits` significant digits, e.g.
    /// `-1.2340e-5`. Zero renders as `0`.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational().abs();
        // initial estimate of floor(log10|x|)
        let l2 = self.log2_floor().unwrap() as f64;
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        while q >= pow10(e10 + 1) {
            e10 += 1;
        }
        while q < pow10(e10) {
            e10 -= 1;
        }
        let scaled = &q * pow10(digits as i64 - 1 - e10);
        let (int, frac) = scaled.numer().div_rem(scaled.denom());
        let mut int = int;
        if BigRational::new(frac * 2, scaled.denom().clone()) >= BigRational::one() {
            int += 1;
        }
        if int >= num_traits::pow(ten.clone(), digits) {
            int /= &ten;
            e10 += 1;
        }
        let s = int.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / 10;
    let e = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

impl fmt::Display for HReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

impl Add for &HReal {
    type Output = HReal;
    fn add(self, rhs: &HReal) -> HReal {
        let bits = self.max_bits(rhs);
        if self.is_zero() {
            return rhs.with_bits(bits);
        }
        if rhs.is_zero() {
            return self.with_bits(bits);
        }
        let top_a = self.log2_floor().unwrap();
        let top_b = rhs.log2_floor().unwrap();
        // Operand entirely below the rounding position of the other.
        if top_a - top_b > bits as i64 + 2 {
            return self.with_bits(bits);
        }
        if top_b - top_a > bits as i64 + 2 {
            return rhs.with_bits(bits);
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        HReal::from_parts(a + b, e, bits)
    }
}

impl Neg for &HReal {
    type Output = HReal;
    fn neg(self) -> HReal {
        HReal {
            mant: -&self.mant,
            exp: self.exp,
            bits: self.bits,
        }
    }
}

impl Neg for HReal {
    type Output = HReal;
    fn neg(self) -> HReal {
        -&self
    }
}

impl Sub for &HReal {
    type Output = HReal;
    fn sub(self, rhs: &HReal) -> HReal {
        self + &(-rhs)
    }
}

impl Mul for &HReal {
    type Output = HReal;
    fn mul(self, rhs: &HReal) -> HReal {
        HReal::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp, self.max_bits(rhs))
    }
}

impl Div for &HReal {
    type Output = HReal;
    fn div(self, rhs: &HReal) -> HReal {
        assert!(!rhs.is_zero(), "division by zero");
        let bits = self.max_bits(rhs);
        if self.is_zero() {
            return HReal::zero(bits);
        }
        let shift = (bits as i64 + 4 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as usize;
        let quot = num / &rhs.mant;
        HReal::from_parts(quot, self.exp - rhs.exp - shift, bits)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<HReal> for HReal {
            type Output = HReal;
            fn $m(self, rhs: HReal) -> HReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HReal> for HReal {
            type Output = HReal;
            fn $m(self, rhs: &HReal) -> HReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<HReal> for &HReal {
            type Output = HReal;
            fn $m(self, rhs: HReal) -> HReal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u32 = 200;

    fn r(n: i64, d: i64) -> HReal {
        HReal::from_rational(&BigRational::new(n.into(), d.into()), BITS)
    }

    #[test]
    fn exact_small_arithmetic() {
        let a = r(3, 4);
        let b = r(-5, 8);
        assert_eq!((&a + &b).to_rational(), BigRational::new(1.into(), 8.into()));
        assert_eq!((&a * &b).to_rational(), BigRational::new((-15).into(), 32.into()));
        assert_eq!((&a - &a).signum(), 0);
    }

    #[test]
    fn division_and_sqrt() {
        let third = r(1, 3);
        let back = &third * &HReal::from_int(3, BITS);
        let tol = HReal::from_parts(BigInt::one(), -(BITS as i64) + 2, BITS);
        assert!(back.close_to(&HReal::from_int(1, BITS), &tol));
        let two = HReal::from_int(2, BITS);
        let s = two.sqrt().unwrap();
        assert!(s.square().close_to(&two, &tol));
        assert!(HReal::from_int(-1, BITS).sqrt().is_err());
        assert_eq!(HReal::from_int(49, BITS).sqrt().unwrap().to_rational(), BigRational::from_integer(7.into()));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(HReal::parse("0.25", BITS).unwrap().to_rational(), BigRational::new(1.into(), 4.into()));
        assert_eq!(HReal::parse("-1/2", BITS).unwrap().to_rational(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(HReal::parse("3e2", BITS).unwrap().to_rational(), BigRational::from_integer(300.into()));
        assert_eq!(HReal::parse("-.5E-1", BITS).unwrap().to_decimal(30), "-5.00000000000000000000000000000e-2");
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "e5"] {
            assert!(HReal::parse(bad, BITS).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r(1, 8).to_decimal(3), "1.25e-1");
        assert_eq!(r(-1, 3).to_decimal(5), "-3.3333e-1");
        assert_eq!(r(2, 3).to_decimal(4), "6.667e-1");
        assert_eq!(HReal::from_int(999_999, BITS).to_decimal(3), "1.00e6");
        assert_eq!(HReal::from_int(7, BITS).to_decimal(1), "7e0");
        assert_eq!(HReal::zero(BITS).to_decimal(5), "0");
    }

    #[test]
    fn far_apart_addition() {
        let big = HReal::from_int(1, 64);
        let tiny = big.mul_pow2(-500);
        assert_eq!((&big + &tiny).to_rational(), big.to_rational());
        assert_eq!((&tiny + &big).to_rational(), big.to_rational());
    }

    #[test]
    fn rounding_carries_into_new_bit() {
        // 0b1111 rounded to 3 bits → 0b10000 = 16
        let (m, e) = round_mantissa(BigInt::from(15), 0, 3);
        assert_eq!(&m << e as usize, BigInt::from(16));
        assert!(m.bits() <= 3);
    }
}
