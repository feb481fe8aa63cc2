use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{LaurentPoly, QError};

/// Truncated power series Σ_{e<N} c_e(z) q^e with Laurent-polynomial
/// coefficients. Everything is computed modulo q^N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentQSeries {
    coeffs: Vec<LaurentPoly>,
}

impl LaurentQSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        Self {
            coeffs: vec![LaurentPoly::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(1, 0, 0, order)
    }

    /// c · z^{z_exp} · q^{q_exp}, dropped if `q_exp >= order`.
    pub fn monomial(c: impl Into<BigInt>, z_exp: i64, q_exp: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if q_exp < order {
            s.coeffs[q_exp] = LaurentPoly::monomial(c, z_exp);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "truncation order must be at least 1");
        Self { coeffs }
    }

    /// z-free series from integer coefficients; extra entries are truncated,
    /// missing ones are zero.
    pub fn from_ints(values: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (e, v) in values.iter().enumerate().take(order) {
            s.coeffs[e] = LaurentPoly::monomial(*v, 0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, q_exp: usize) -> &LaurentPoly {
        &self.coeffs[q_exp]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<(), QError> {
        if self.order() != other.order() {
            return Err(QError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, QError> {
        self.check_order(other)?;
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, QError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.sub_assign_ref(b);
        }
        Ok(out)
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.order(), other.order(), "truncation order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign_ref(b);
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(LaurentPoly::neg).collect(),
        }
    }

    /// Cauchy product modulo q^N.
    pub fn try_mul(&self, other: &Self) -> Result<Self, QError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                out.coeffs[i + j].add_assign_ref(&prod);
            }
        }
        Ok(out)
    }

    /// Exact quotient A/B modulo q^N. B's q^0 coefficient must be a unit
    /// monomial ±z^e.
    pub fn try_div_unit(&self, divisor: &Self) -> Result<Self, QError> {
        self.check_order(divisor)?;
        let (sign, shift) = divisor.coeffs[0]
            .as_unit()
            .ok_or_else(|| QError::NonUnitLeading(divisor.coeffs[0].to_string()))?;
        let unit_inv = BigInt::from(sign);
        let n = self.order();
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(n);
        for e in 0..n {
            let mut acc = self.coeffs[e].clone();
            for (i, c) in out.iter().enumerate() {
                let b = &divisor.coeffs[e - i];
                if b.is_zero() || c.is_zero() {
                    continue;
                }
                acc.sub_assign_ref(&c.mul(b));
            }
            // divide by ±z^shift
            let mut q = LaurentPoly::zero();
            q.add_scaled(&acc, &unit_inv, -shift);
            out.push(q);
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplies by c · z^{z_exp} · q^{q_exp}.
    pub fn mul_monomial(&self, c: &BigInt, z_exp: i64, q_exp: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for e in 0..n.saturating_sub(q_exp) {
            let mut p = LaurentPoly::zero();
            p.add_scaled(&self.coeffs[e], c, z_exp);
            out.coeffs[e + q_exp] = p;
        }
        out
    }

    /// In place: self *= (1 − c z^{z_exp} q^{q_exp}).
    pub fn mul_binomial(&mut self, c: &BigInt, z_exp: i64, q_exp: usize) {
        let n = self.order();
        if q_exp >= n || c.is_zero() {
            return;
        }
        let minus_c = -c;
        if q_exp == 0 {
            for coeff in &mut self.coeffs {
                let old = coeff.clone();
                coeff.add_scaled(&old, &minus_c, z_exp);
            }
            return;
        }
        for e in (q_exp..n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(e);
            hi[0].add_scaled(&lo[e - q_exp], &minus_c, z_exp);
        }
    }

    /// In place: self /= (1 − c z^{z_exp} q^{q_exp}) with q_exp ≥ 1.
    pub fn div_binomial(&mut self, c: &BigInt, z_exp: i64, q_exp: usize) {
        assert!(q_exp >= 1, "dividing by a non-unit binomial");
        let n = self.order();
        if q_exp >= n || c.is_zero() {
            return;
        }
        for e in q_exp..n {
            let (lo, hi) = self.coeffs.split_at_mut(e);
            hi[0].add_scaled(&lo[e - q_exp], c, z_exp);
        }
    }

    /// Renders `q^e: <poly>` lines for every nonzero coefficient.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                s.push_str(&format!("q^{e}: {c}\n"));
            }
        }
        s
    }

    /// First (q-exponent, z-exponent) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, i64)> {
        for (e, (a, b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            if a != b {
                let mut diff = a.clone();
                diff.sub_assign_ref(b);
                return Some((e, diff.min_exp().unwrap()));
            }
        }
        None
    }
}

impl fmt::Display for LaurentQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl std::ops::Add for &LaurentQSeries {
    type Output = LaurentQSeries;
    fn add(self, rhs: Self) -> LaurentQSeries {
        self.try_add(rhs).expect("truncation order mismatch")
    }
}

impl std::ops::Sub for &LaurentQSeries {
    type Output = LaurentQSeries;
    fn sub(self, rhs: Self) -> LaurentQSeries {
        self.try_sub(rhs).expect("truncation order mismatch")
    }
}

impl std::ops::Mul for &LaurentQSeries {
    type Output = LaurentQSeries;
    fn mul(self, rhs: Self) -> LaurentQSeries {
        self.try_mul(rhs).expect("truncation order mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn one_int() -> BigInt {
        BigInt::one()
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn difference_of_squares() {
        let n = 6;
        let mut a = LaurentQSeries::one(n);
        a.mul_binomial(&BigInt::from(1), 1, 1); // 1 - zq
        let mut b = LaurentQSeries::one(n);
        b.mul_binomial(&BigInt::from(-1), 1, 1); // 1 + zq
        let p = &a * &b;
        let mut expect = LaurentQSeries::one(n);
        expect.mul_binomial(&BigInt::from(1), 2, 2);
        assert_eq!(p, expect);
        assert_eq!(p.coeff(2), &poly(&[(2, -1)]));
    }

    #[test]
    fn identity_and_geometric() {
        let n = 9;
        let a = LaurentQSeries::from_coeffs(
            (0..n).map(|e| poly(&[(-(e as i64), 2), (1, e as i64 - 3)])).collect(),
        );
        assert_eq!(&a * &LaurentQSeries::one(n), a);
        let one_minus_q = LaurentQSeries::from_ints(&[1, -1], n);
        let geom = LaurentQSeries::from_ints(&[1; 9], n);
        assert_eq!(&one_minus_q * &geom, LaurentQSeries::one(n));
    }

    #[test]
    fn division_examples() {
        let n = 7;
        let one_minus_q = LaurentQSeries::from_ints(&[1, -1], n);
        let inv = LaurentQSeries::one(n).try_div_unit(&one_minus_q).unwrap();
        assert_eq!(inv, LaurentQSeries::from_ints(&[1; 7], n));

        // 1/((1-q)(1-q^2)) mod q^4: partitions into parts ≤ 2.
        let n = 4;
        let mut den = LaurentQSeries::one(n);
        den.mul_binomial(&one_int(), 0, 1);
        den.mul_binomial(&one_int(), 0, 2);
        let q = LaurentQSeries::one(n).try_div_unit(&den).unwrap();
        let brute: Vec<i64> = (0..4i64)
            .map(|m| (0..=m / 2).count() as i64) // m = a + 2b
            .collect();
        assert_eq!(brute, vec![1, 1, 2, 2]);
        assert_eq!(q, LaurentQSeries::from_ints(&brute, n));

        let mut a = LaurentQSeries::one(5);
        a.mul_binomial(&one_int(), -1, 1);
        a.mul_binomial(&BigInt::from(-3), 2, 2);
        assert_eq!(a.try_div_unit(&a).unwrap(), LaurentQSeries::one(5));
    }

    #[test]
    fn division_by_shifted_unit() {
        let n = 5;
        let mut b = LaurentQSeries::monomial(-1, 3, 0, n);
        b.add_assign_ref(&LaurentQSeries::monomial(2, 1, 1, n));
        let a = LaurentQSeries::from_ints(&[4, 0, -1, 2], n);
        let quot = a.try_div_unit(&b).unwrap();
        assert_eq!(&quot * &b, a);
    }

    #[test]
    fn errors() {
        let a = LaurentQSeries::one(3);
        let b = LaurentQSeries::one(4);
        assert!(matches!(a.try_mul(&b), Err(QError::OrderMismatch(3, 4))));
        let two = LaurentQSeries::from_ints(&[2], 3);
        assert!(matches!(a.try_div_unit(&two), Err(QError::NonUnitLeading(_))));
        let z_free_nonunit = LaurentQSeries::from_coeffs(vec![poly(&[(0, 1), (1, -1)]); 3]);
        assert!(a.try_div_unit(&z_free_nonunit).is_err());
    }

    #[test]
    fn binomial_division_inverts_multiplication() {
        let n = 12;
        let a = LaurentQSeries::from_coeffs((0..n).map(|e| poly(&[(e as i64 % 3, 1)])).collect());
        let mut b = a.clone();
        b.mul_binomial(&BigInt::from(-2), -1, 3);
        b.div_binomial(&BigInt::from(-2), -1, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn dump_format() {
        let mut s = LaurentQSeries::one(5);
        s.add_assign_ref(&LaurentQSeries::monomial(-1, 1, 0, 5));
        s.add_assign_ref(&LaurentQSeries::monomial(1, -1, 4, 5));
        s.add_assign_ref(&LaurentQSeries::monomial(-1, 2, 4, 5));
        assert_eq!(s.dump(), "q^0: 1 - z\nq^4: z^-1 - z^2\n");
        assert_eq!(s.first_difference(&LaurentQSeries::one(5)), Some((0, 1)));
    }
}
