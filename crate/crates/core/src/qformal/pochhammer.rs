use num_bigint::BigInt;

use super::LaurentQSeries;

/// The monomial `sign · z^z_exp · q^q_exp` appearing as the first argument of
/// a q-Pochhammer symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QMonomial {
    pub sign: i8,
    pub z_exp: i64,
    pub q_exp: usize,
}

impl QMonomial {
    /// q^j
    pub fn q(j: usize) -> Self {
        Self { sign: 1, z_exp: 0, q_exp: j }
    }

    /// −q^j
    pub fn neg_q(j: usize) -> Self {
        Self { sign: -1, z_exp: 0, q_exp: j }
    }

    /// z·q^j
    pub fn z(j: usize) -> Self {
        Self { sign: 1, z_exp: 1, q_exp: j }
    }

    /// q^j/z
    pub fn z_inv(j: usize) -> Self {
        Self { sign: 1, z_exp: -1, q_exp: j }
    }
}

/// (y; q^b)_n = Π_{k<n} (1 − y q^{bk}) mod q^N.
pub fn pochhammer(y: QMonomial, base_exp: usize, n: usize, order: usize) -> LaurentQSeries {
    let mut s = LaurentQSeries::one(order);
    let c = BigInt::from(y.sign);
    for k in 0..n {
        let e = y.q_exp + base_exp * k;
        if e >= order {
            break;
        }
        s.mul_binomial(&c, y.z_exp, e);
    }
    s
}

/// 1/(y; q^b)_n mod q^N; requires y to carry a positive power of q.
pub fn inv_pochhammer(y: QMonomial, base_exp: usize, n: usize, order: usize) -> LaurentQSeries {
    let mut s = LaurentQSeries::one(order);
    div_pochhammer(&mut s, y, base_exp, n);
    s
}

/// In place: s /= (y; q^b)_n.
pub fn div_pochhammer(s: &mut LaurentQSeries, y: QMonomial, base_exp: usize, n: usize) {
    assert!(y.q_exp >= 1, "(y;q)_n with y free of q is not a unit");
    let c = BigInt::from(y.sign);
    for k in 0..n {
        let e = y.q_exp + base_exp * k;
        if e >= s.order() {
            break;
        }
        s.div_binomial(&c, y.z_exp, e);
    }
}

/// In place: s *= (y; q^b)_n.
pub fn mul_pochhammer(s: &mut LaurentQSeries, y: QMonomial, base_exp: usize, n: usize) {
    let c = BigInt::from(y.sign);
    for k in 0..n {
        let e = y.q_exp + base_exp * k;
        if e >= s.order() {
            break;
        }
        s.mul_binomial(&c, y.z_exp, e);
    }
}
