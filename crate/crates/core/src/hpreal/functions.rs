use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{HReal, HpError, Precision};
use crate::cache::WriteOnceCache;

pub const EXP_LIMIT: f64 = 1e4;
pub const ERF_LIMIT: f64 = 50.0;
pub const HERMITE_MAX: usize = 200;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

fn const_cache() -> &'static WriteOnceCache<(&'static str, u32), HReal> {
    static CACHE: OnceLock<WriteOnceCache<(&'static str, u32), HReal>> = OnceLock::new();
    CACHE.get_or_init(WriteOnceCache::new)
}

fn fixed_one(frac: u64) -> BigInt {
    BigInt::one() << frac as usize
}

/// atan(1/n) · 2^frac, by the alternating series.
fn atan_inv_fixed(n: u64, frac: u64) -> BigInt {
    let n2 = BigInt::from(n * n);
    let mut power = fixed_one(frac) / n;
    let mut sum = power.clone();
    let mut k = 1u64;
    while !power.is_zero() {
        power /= &n2;
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn pi_bits(bits: u32) -> HReal {
    let arc = const_cache().get_or_insert_with(("pi", bits), || {
        let frac = bits as u64 + 32;
        let v = 16 * atan_inv_fixed(5, frac) - 4 * atan_inv_fixed(239, frac);
        HReal::from_fixed(v, frac, bits)
    });
    (*arc).clone()
}

fn ln2_bits(bits: u32) -> HReal {
    let arc = const_cache().get_or_insert_with(("ln2", bits), || {
        // ln 2 = Σ_{k≥1} 1/(k·2^k)
        let frac = bits as u64 + 32;
        let mut sum = BigInt::zero();
        let mut k = 1u64;
        loop {
            let term = fixed_one(frac) >> k as usize;
            if term.is_zero() {
                break;
            }
            sum += term / k;
            k += 1;
        }
        HReal::from_fixed(sum, frac, bits)
    });
    (*arc).clone()
}

/// exp(x) to `bits` significant bits; caller checks range.
fn exp_bits(x: &HReal, bits: u32) -> HReal {
    if x.is_zero() {
        return HReal::from_int(1, bits);
    }
    let xf = x.to_f64();
    let m = (xf / std::f64::consts::LN_2).round() as i64;
    let mag = (m.unsigned_abs().max(1) as f64).log2().ceil() as u32;
    let work = bits + mag + 16;
    let ln2 = ln2_bits(work);
    let r = &x.with_bits(work + 8) - &ln2.mul_int(m);
    // halve r until |r| < 2^-s
    let s: u64 = ((work as f64).sqrt() / 2.0).ceil() as u64;
    let frac = work as u64 + s + 16;
    let y = r.mul_pow2(-(s as i64)).to_fixed(frac);
    let one = fixed_one(frac);
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = (&term * &y) >> frac as usize;
        term /= k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..s {
        sum = (&sum * &sum) >> frac as usize;
    }
    HReal::from_fixed(sum, frac, bits).mul_pow2(m)
}

/// erf(x) with absolute error ≲ 2^-abs_bits, through the Maclaurin series.
fn erf_abs(x: &HReal, abs_bits: u64, bits: u32) -> HReal {
    if x.is_zero() {
        return HReal::zero(bits);
    }
    let xf = x.to_f64();
    // terms grow to ~e^{x²} before decaying
    let growth = (xf * xf * LOG2_E).ceil() as u64;
    let frac = abs_bits + growth + 32;
    let xfix = x.to_fixed(frac);
    let x2 = (&xfix * &xfix) >> frac as usize;
    let mut a = xfix.clone();
    let mut sum = xfix;
    let mut n = 1u64;
    loop {
        a = (&a * &x2) >> frac as usize;
        a /= n;
        if a.is_zero() {
            break;
        }
        let term = &a / (2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    let wide = (bits as u64).max(abs_bits) as u32 + 16;
    let s = HReal::from_fixed(sum, frac, wide);
    let two_over_sqrt_pi = HReal::from_int(2, wide) / pi_bits(wide).sqrt().expect("pi > 0");
    (&s * &two_over_sqrt_pi).with_bits(bits)
}

impl Precision {
    pub fn pi(&self) -> HReal {
        pi_bits(self.bits())
    }

    pub fn ln2(&self) -> HReal {
        ln2_bits(self.bits())
    }

    pub fn sqrt(&self, x: &HReal) -> Result<HReal, HpError> {
        self.round(x).sqrt()
    }

    /// e^x for |x| ≤ 10⁴.
    pub fn exp(&self, x: &HReal) -> Result<HReal, HpError> {
        let xf = x.to_f64();
        if xf.is_nan() || xf.abs() > EXP_LIMIT {
            return Err(HpError::Range {
                func: "exp",
                arg: x.to_decimal(6),
                limit: EXP_LIMIT.to_string(),
            });
        }
        Ok(exp_bits(x, self.bits()))
    }

    /// Natural logarithm of a positive number (Newton on exp).
    pub fn ln(&self, x: &HReal) -> Result<HReal, HpError> {
        if !x.is_positive() {
            return Err(HpError::Domain { func: "ln" });
        }
        let bits = self.bits() + 16;
        let e2 = x.log2_floor().unwrap();
        let y = x.mul_pow2(-e2).with_bits(bits); // in [1, 2)
        let mut g = HReal::parse(&format!("{:e}", y.to_f64().ln()), bits)?;
        let one = HReal::from_int(1, bits);
        let mut good = 50u32;
        while good < 2 * bits {
            g = &g + &(&(&y * &exp_bits(&(-&g), bits)) - &one);
            good *= 2;
        }
        g = &g + &(&(&y * &exp_bits(&(-&g), bits)) - &one);
        let res = &g + &ln2_bits(bits).mul_int(e2);
        Ok(res.with_bits(self.bits()))
    }

    /// Error function for |x| ≤ 50.
    pub fn erf(&self, x: &HReal) -> Result<HReal, HpError> {
        let xf = x.to_f64();
        if xf.is_nan() || xf.abs() > ERF_LIMIT {
            return Err(HpError::Range {
                func: "erf",
                arg: x.to_decimal(6),
                limit: ERF_LIMIT.to_string(),
            });
        }
        if x.is_zero() {
            return Ok(HReal::zero(self.bits()));
        }
        // relative accuracy near 0 needs the leading bits of x
        let small = (-x.log2_floor().unwrap()).max(0) as u64;
        Ok(erf_abs(x, self.bits() as u64 + small + 8, self.bits()))
    }

    /// 1 − erf(x), accurate relative to its own size (|x| ≤ 50).
    pub fn erfc(&self, x: &HReal) -> Result<HReal, HpError> {
        let xf = x.to_f64();
        if xf.is_nan() || xf.abs() > ERF_LIMIT {
            return Err(HpError::Range {
                func: "erfc",
                arg: x.to_decimal(6),
                limit: ERF_LIMIT.to_string(),
            });
        }
        let bits = self.bits();
        let one = HReal::from_int(1, bits);
        if xf <= 0.0 {
            return Ok(&one - &self.erf(x)?);
        }
        // erfc(x) ~ e^{-x²}: the subtraction loses about x²·log2(e) bits
        let lost = (xf * xf * LOG2_E).ceil() as u64 + 16;
        let abs_bits = bits as u64 + lost;
        let wide = abs_bits as u32 + 8;
        let e = erf_abs(x, abs_bits, wide);
        Ok((&HReal::from_int(1, wide) - &e).with_bits(bits))
    }

    /// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
    pub fn hermite(&self, n: usize, x: &HReal) -> HReal {
        assert!(n <= HERMITE_MAX, "hermite order {n} exceeds {HERMITE_MAX}");
        let bits = self.bits() + n as u32 / 2 + 16;
        let x = x.with_bits(bits);
        let mut prev = HReal::from_int(1, bits);
        if n == 0 {
            return prev.with_bits(self.bits());
        }
        let two_x = x.mul_int(2);
        let mut cur = two_x.clone();
        for j in 1..n {
            let next = &(&two_x * &cur) - &prev.mul_int(2 * j as i64);
            prev = cur;
            cur = next;
        }
        cur.with_bits(self.bits())
    }

    /// D_n(x) = 2^{−n/2} e^{−x²/4} H_n(x/√2) for integer n ≥ 0.
    pub fn pcf_d(&self, n: usize, x: &HReal) -> Result<HReal, HpError> {
        let hp = self.raised(4);
        let bits = hp.bits();
        let sqrt2 = HReal::from_int(2, bits).sqrt()?;
        let h = hp.hermite(n, &(x.with_bits(bits) / &sqrt2));
        let g = hp.exp(&(-(x.square().mul_pow2(-2))))?;
        let mut d = (&h * &g).mul_pow2(-((n / 2) as i64));
        if n % 2 == 1 {
            d = &d / &sqrt2;
        }
        Ok(self.round(&d))
    }

    /// D_{−1}(x) = √(π/2) e^{x²/4} (1 − erf(x/√2)) for |x| ≤ 50.
    pub fn pcf_dm1(&self, x: &HReal) -> Result<HReal, HpError> {
        let xf = x.to_f64();
        if xf.is_nan() || xf.abs() > ERF_LIMIT {
            return Err(HpError::Range {
                func: "pcf_dm1",
                arg: x.to_decimal(6),
                limit: ERF_LIMIT.to_string(),
            });
        }
        let hp = self.raised(4);
        let bits = hp.bits();
        let sqrt2 = HReal::from_int(2, bits).sqrt()?;
        let c = hp.erfc(&(x.with_bits(bits) / &sqrt2))?;
        let g = hp.exp(&x.square().mul_pow2(-2))?;
        let root = (hp.pi().mul_pow2(-1)).sqrt()?;
        Ok(self.round(&(&(&root * &g) * &c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p() -> Precision {
        Precision::default()
    }

    /// |a − b| ≤ 10^e · max(1, |b|)
    fn near(a: &HReal, b: &HReal, e: i64, prec: &Precision) -> bool {
        let scale = if b.abs().cmp_value(&prec.int(1)).is_gt() { b.abs() } else { prec.int(1) };
        (a - b).abs().cmp_value(&(&prec.pow10(e) * &scale)).is_le()
    }

    #[test]
    fn exp_against_rational_series() {
        let prec = p();
        let hi = prec.raised(20);
        // e = Σ 1/k! over exact rationals
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        for k in 1..80i64 {
            sum += &term;
            term /= BigRational::from_integer(k.into());
        }
        let oracle = hi.rational(&sum);
        let e = prec.exp(&prec.int(1)).unwrap();
        assert!(near(&e, &oracle, -(prec.digits() as i64), &prec));
        assert!(e.to_decimal(16).starts_with("2.718281828459045"));
        assert_eq!(prec.exp(&prec.int(0)).unwrap().to_rational(), BigRational::one());
    }

    #[test]
    fn exp_reciprocity_and_range() {
        let prec = p();
        for s in ["1", "0.001", "-3.5", "17.25", "123.456", "-700", "9999.5"] {
            let x = prec.parse(s).unwrap();
            let prod = &prec.exp(&x).unwrap() * &prec.exp(&(-&x)).unwrap();
            assert!(near(&prod, &prec.int(1), -(prec.digits() as i64) + 2, &prec), "{s}");
        }
        assert!(prec.exp(&prec.int(10_001)).is_err());
        assert!(prec.exp(&prec.int(-20_000)).is_err());
    }

    #[test]
    fn ln_inverts_exp() {
        let prec = p();
        for s in ["2", "0.1", "1e-30", "12345.678"] {
            let x = prec.parse(s).unwrap();
            let back = prec.exp(&prec.ln(&x).unwrap()).unwrap();
            assert!(near(&back, &x, -(prec.digits() as i64) + 2, &prec) || {
                let rel = &(&back - &x) / &x;
                rel.abs().cmp_value(&prec.pow10(-(prec.digits() as i64) + 2)).is_le()
            });
        }
        assert!(prec.ln(&prec.int(0)).is_err());
        let l2 = prec.ln(&prec.int(2)).unwrap();
        assert!(near(&l2, &prec.ln2(), -(prec.digits() as i64), &prec));
    }

    #[test]
    fn pi_value() {
        let prec = p();
        assert!(prec
            .pi()
            .to_decimal(50)
            .starts_with("3.1415926535897932384626433832795028841971693993751"));
    }

    /// Gauss–Legendre quadrature of (2/√π) e^{−u²} over [0, 1]; nodes by
    /// Newton iteration on the Legendre recurrence.
    fn erf1_quadrature(prec: &Precision) -> HReal {
        let n = 48usize;
        let one = prec.int(1);
        let legendre = |x: &HReal| -> (HReal, HReal) {
            // (P_n(x), P_n'(x))
            let mut p0 = prec.int(1);
            let mut p1 = x.clone();
            for j in 2..=n as i64 {
                let p2 = (&(&x.mul_int(2 * j - 1) * &p1) - &p0.mul_int(j - 1)).div_int(j);
                p0 = p1;
                p1 = p2;
            }
            let dp = &(&p0 - &(x * &p1)).mul_int(n as i64) / &(&one - &x.square());
            (p1, dp)
        };
        let mut total = prec.int(0);
        for i in 1..=n {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = prec.parse(&format!("{guess:e}")).unwrap();
            let mut dp = one.clone();
            for _ in 0..12 {
                let (p, d) = legendre(&x);
                x = &x - &(&p / &d);
                dp = d;
            }
            let weight = &prec.int(2) / &(&(&one - &x.square()) * &dp.square());
            // map [−1, 1] → [0, 1]
            let u = (&x + &one).mul_pow2(-1);
            total = &total + &(&weight * &prec.exp(&(-u.square())).unwrap());
        }
        &total / &prec.pi().sqrt().unwrap()
    }

    #[test]
    fn erf_one_against_quadrature() {
        let prec = p();
        let oracle = erf1_quadrature(&prec.raised(20));
        let e = prec.erf(&prec.int(1)).unwrap();
        let diff = (&e - &oracle).abs();
        assert!(diff.cmp_value(&prec.pow10(-(prec.digits() as i64))).is_le(), "{} vs {}", e.to_decimal(60), oracle.to_decimal(60));
        assert!(e.to_decimal(20).starts_with("8.42700792949714869"));
    }

    #[test]
    fn erf_odd_and_limits() {
        let prec = p();
        assert!(prec.erf(&prec.int(0)).unwrap().is_zero());
        for s in ["0.3", "1.7", "4", "12.5", "1e-8"] {
            let x = prec.parse(s).unwrap();
            let sum = &prec.erf(&x).unwrap() + &prec.erf(&(-&x)).unwrap();
            assert!(sum.is_zero() || sum.abs().cmp_value(&prec.pow10(-60)).is_le(), "{s}");
        }
        assert!(prec.erf(&prec.ratio(101, 2)).is_err());
        // tiny argument keeps relative accuracy: erf(x) ≈ 2x/√π
        let x = prec.parse("1e-20").unwrap();
        let approx = &x.mul_int(2) / &prec.pi().sqrt().unwrap();
        let rel = &(&prec.erf(&x).unwrap() - &approx) / &approx;
        assert!(rel.abs().cmp_value(&prec.pow10(-39)).is_le());
    }

    #[test]
    fn erfc_tail_is_relative() {
        let prec = p();
        // erfc(10) = 2.088487583762544757000786294957788611e-45
        let c = prec.erfc(&prec.int(10)).unwrap();
        assert!(c.to_decimal(20).starts_with("2.08848758376254475"), "{}", c.to_decimal(20));
    }

    #[test]
    fn hermite_small_orders() {
        let prec = p();
        let x = prec.ratio(3, 7);
        assert_eq!(prec.hermite(0, &x).to_rational(), BigRational::one());
        assert!(near(&prec.hermite(1, &x), &x.mul_int(2), -55, &prec));
        assert!(near(&prec.hermite(3, &prec.int(1)), &prec.int(-4), -55, &prec));
    }

    /// Exact mirror of the recurrence over rationals.
    fn hermite_exact(n: usize, x: &BigRational) -> Vec<BigRational> {
        let mut h = vec![BigRational::one(), x * BigRational::from_integer(2.into())];
        for j in 1..n {
            let next = x * &h[j] * BigRational::from_integer(2.into())
                - &h[j - 1] * BigRational::from_integer((2 * j as i64).into());
            h.push(next);
        }
        h
    }

    #[test]
    fn hermite_matches_exact_mirror() {
        let prec = p();
        let xq = BigRational::new(5.into(), 3.into());
        let h = hermite_exact(30, &xq);
        for n in 1..30 {
            let lhs = &h[n + 1] - &xq * &h[n] * BigRational::from_integer(2.into())
                + &h[n - 1] * BigRational::from_integer((2 * n as i64).into());
            assert!(lhs.is_zero());
        }
        for (n, hq) in h.iter().enumerate().take(31) {
            let v = prec.hermite(n, &prec.rational(&xq));
            let oracle = prec.rational(hq);
            let rel = if hq.is_zero() { v.abs() } else { (&(&v - &oracle) / &oracle).abs() };
            assert!(rel.cmp_value(&prec.pow10(-55)).is_le(), "n={n}");
        }
    }

    #[test]
    fn pcf_d_values() {
        let prec = p();
        assert!(near(&prec.pcf_d(0, &prec.int(0)).unwrap(), &prec.int(1), -55, &prec));
        let d1 = prec.pcf_d(1, &prec.int(2)).unwrap();
        let oracle = &prec.int(2) * &prec.exp(&prec.int(-1)).unwrap();
        assert!(near(&d1, &oracle, -55, &prec));
        for m in 0..10 {
            assert!(prec.pcf_d(2 * m + 1, &prec.int(0)).unwrap().is_zero());
        }
    }

    #[test]
    fn pcf_d_at_zero_is_scaled_hermite() {
        let prec = p();
        for m in 0..12u64 {
            let n = 2 * m as usize;
            // H_{2m}(0) = (−1)^m (2m)!/m!
            let num: BigInt = ((m + 1)..=(2 * m)).map(BigInt::from).product();
            let h0 = if m % 2 == 0 { num } else { -num };
            // D_{2m}(0) · 2^m must round to H_{2m}(0)
            let d = prec.pcf_d(n, &prec.int(0)).unwrap();
            assert_eq!(d.mul_pow2(m as i64).round_to_int(), h0, "m={m}");
        }
    }

    #[test]
    fn pcf_d_parity() {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let prec = p();
        let tol = prec.pow10(-(prec.digits() as i64) + 2);
        for i in 0..100u64 {
            let mut h = DefaultHasher::new();
            i.hash(&mut h);
            let x = prec.ratio((h.finish() % 8001) as i64 - 4000, 1000);
            for n in 0..=20usize {
                let a = prec.pcf_d(n, &(-&x)).unwrap();
                let b = prec.pcf_d(n, &x).unwrap();
                let b = if n % 2 == 1 { -b } else { b };
                assert!(a.close_to(&b, &(&tol * &b.abs().max_one(&prec))), "n={n} x={x}");
            }
        }
    }

    trait MaxOne {
        fn max_one(&self, prec: &Precision) -> HReal;
    }
    impl MaxOne for HReal {
        fn max_one(&self, prec: &Precision) -> HReal {
            if self.cmp_value(&prec.int(1)).is_gt() {
                self.clone()
            } else {
                prec.int(1)
            }
        }
    }

    #[test]
    fn weber_residual() {
        // Fourth-order centred stencil (the Richardson extrapolation of the
        // plain second difference): the plain stencil's h² truncation error
        // alone exceeds 10^{−P/2} at h = 10^{−P/4} once n approaches 10.
        let prec = p();
        let pp = prec.digits() as i64;
        let h = prec.pow10(-pp / 4);
        let h2 = h.square();
        let tol = prec.pow10(-pp / 2);
        for n in 0..=10usize {
            for s in ["-2.5", "-0.75", "0", "0.4", "1.9", "3.3"] {
                let x = prec.parse(s).unwrap();
                let d = |y: &HReal| prec.pcf_d(n, y).unwrap();
                let f0 = d(&x);
                let f1 = &d(&(&x + &h)) + &d(&(&x - &h));
                let f2 = &d(&(&x + &h.mul_int(2))) + &d(&(&x - &h.mul_int(2)));
                let second = &(&(&f1.mul_int(16) - &f2) - &f0.mul_int(30)) / &h2.mul_int(12);
                let coef = &prec.ratio(2 * n as i64 + 1, 2) - &x.square().mul_pow2(-2);
                let res = &second + &(&coef * &f0);
                assert!(res.abs().cmp_value(&tol).is_le(), "n={n} x={s} res={}", res.to_decimal(5));
            }
        }
    }

    #[test]
    fn dm1_values() {
        let prec = p();
        let at0 = prec.pcf_dm1(&prec.int(0)).unwrap();
        let oracle = prec.pi().mul_pow2(-1).sqrt().unwrap();
        assert!(near(&at0, &oracle, -(prec.digits() as i64), &prec));
        let big = prec.pcf_dm1(&prec.int(10)).unwrap();
        assert!(big.is_positive());
        assert!(big.cmp_value(&prec.pow10(-9)).is_lt());
        assert!(prec.pcf_dm1(&prec.int(51)).is_err());
    }

    #[test]
    fn dm1_reflection() {
        let prec = p();
        let sqrt2 = prec.int(2).sqrt().unwrap();
        let two_pi_root = prec.pi().mul_int(2).sqrt().unwrap();
        for s in ["0.1", "0.5", "1", "2.25", "6", "-1.5"] {
            let x = prec.parse(s).unwrap();
            let lhs = &prec.pcf_dm1(&(-&x)).unwrap() - &prec.pcf_dm1(&x).unwrap();
            let rhs = &(&two_pi_root * &prec.exp(&x.square().mul_pow2(-2)).unwrap())
                * &prec.erf(&(&x / &sqrt2)).unwrap();
            let tol = &prec.pow10(-(prec.digits() as i64) + 3) * &rhs.abs().max_one(&prec);
            assert!(lhs.close_to(&rhs, &tol), "{s}");
        }
    }
}
