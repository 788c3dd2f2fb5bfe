//! Exact rational helpers: generalized binomials, Bernoulli numbers and
//! power-sum polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::{OnceLock, RwLock};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Generalized binomial coefficient `t(t-1)...(t-l+1)/l!`, integral for integral `t`.
pub fn binomial(t: i64, l: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..l as i64 {
        num *= BigInt::from(t - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `binomial` as a rational.
pub fn binomial_q(t: i64, l: u32) -> Q {
    Q::from_integer(binomial(t, l))
}

fn bernoulli_cache() -> &'static RwLock<Vec<Q>> {
    static CACHE: OnceLock<RwLock<Vec<Q>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Q::one()]))
}

/// Bernoulli number with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Q {
    if let Some(b) = bernoulli_cache().read().unwrap().get(k) {
        return b.clone();
    }
    let mut cache = bernoulli_cache().write().unwrap();
    while cache.len() <= k {
        let m = cache.len();
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut acc = Q::zero();
        for (j, bj) in cache.iter().enumerate() {
            acc += binomial_q(m as i64 + 1, j as u32) * bj;
        }
        cache.push(-acc / q_int(m as i64 + 1));
    }
    cache[k].clone()
}

/// Dense polynomial with rational coefficients, `c[i]` multiplying `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

fn power_sum_cache() -> &'static RwLock<Vec<QPoly>> {
    static CACHE: OnceLock<RwLock<Vec<QPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// `P_k(x) = sum_{u=0}^{x-1} u^k` as a polynomial in `x` (with `0^0 = 1`).
pub fn power_sum_poly(k: usize) -> QPoly {
    if let Some(p) = power_sum_cache().read().unwrap().get(k) {
        return p.clone();
    }
    let mut cache = power_sum_cache().write().unwrap();
    while cache.len() <= k {
        let m = cache.len();
        let mut c = vec![Q::zero(); m + 2];
        let inv = Q::new(BigInt::one(), BigInt::from(m as i64 + 1));
        for j in 0..=m {
            c[m + 1 - j] += binomial_q(m as i64 + 1, j as u32) * bernoulli(j) * &inv;
        }
        cache.push(QPoly(c));
    }
    cache[k].clone()
}

/// `F_k(x) = sum_{0<u<x} u^k` as a polynomial in `x`.
pub fn faulhaber_poly(k: usize) -> QPoly {
    let mut p = power_sum_poly(k);
    if k == 0 {
        p.0[0] -= Q::one();
    }
    p
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    v
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp_q(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        for l in 0..6 {
            assert_eq!(binomial(-1, l), BigInt::from(if l % 2 == 0 { 1 } else { -1 }));
        }
        assert_eq!(binomial(-2, 3), BigInt::from(-4));
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(5, 7), BigInt::zero());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), q_frac(-1, 2));
        assert_eq!(bernoulli(2), q_frac(1, 6));
        assert_eq!(bernoulli(3), Q::zero());
        assert_eq!(bernoulli(12), q_frac(-691, 2730));
    }

    #[test]
    fn power_sums_match_direct() {
        for k in 0..8usize {
            let p = power_sum_poly(k);
            let f = faulhaber_poly(k);
            for x in 1..12i64 {
                let direct: BigInt = (0..x).map(|u| BigInt::from(u).pow(k as u32)).sum();
                assert_eq!(p.eval(&q_int(x)), Q::from_integer(direct.clone()));
                let direct_f: BigInt = (1..x).map(|u| BigInt::from(u).pow(k as u32)).sum();
                assert_eq!(f.eval(&q_int(x)), Q::from_integer(direct_f));
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(vp_q(&q_frac(50, 3), 5), Some(2));
        assert_eq!(vp_q(&q_frac(7, 125), 5), Some(-3));
        assert_eq!(vp_q(&Q::zero(), 5), None);
    }
}
