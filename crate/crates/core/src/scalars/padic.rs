//! Precision-tracked p-adic numbers in `Q_p`.

use super::cyclo::CycRat;
use super::rational::{vp_int, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A p-adic number `p^val * unit + O(p^(val + rel))`, or the exact zero.
///
/// When `rel == 0` the value is only known to be `O(p^val)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PAdicNum {
    p: u64,
    exact_zero: bool,
    val: i64,
    unit: BigInt,
    rel: u32,
}

fn ppow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    BigInt::from(p).pow(k as u32)
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl PAdicNum {
    pub fn exact_zero(p: u64) -> Self {
        PAdicNum { p, exact_zero: true, val: 0, unit: BigInt::zero(), rel: 0 }
    }

    /// The inexact zero `O(p^k)`.
    pub fn big_o(p: u64, k: i64) -> Self {
        PAdicNum { p, exact_zero: false, val: k, unit: BigInt::zero(), rel: 0 }
    }

    /// `p^v * x` known modulo `p^abs`.
    fn make(p: u64, v: i64, x: BigInt, abs: i64) -> Self {
        if abs <= v {
            return Self::big_o(p, abs);
        }
        let m = abs - v;
        let x = x.mod_floor(&ppow(p, m));
        if x.is_zero() {
            return Self::big_o(p, abs);
        }
        let t = vp_int(&x, p);
        let rel = m - t;
        let unit = (x / ppow(p, t)).mod_floor(&ppow(p, rel));
        PAdicNum { p, exact_zero: false, val: v + t, unit, rel: rel as u32 }
    }

    /// Integer `x` known modulo `p^abs`.
    pub fn from_int(p: u64, x: &BigInt, abs: i64) -> Self {
        Self::make(p, 0, x.clone(), abs)
    }

    /// Rational `q` known modulo `p^abs` (absolute precision).
    pub fn from_rational(p: u64, q: &Q, abs: i64) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let vn = vp_int(q.numer(), p);
        let vd = vp_int(q.denom(), p);
        let v = vn - vd;
        if abs <= v {
            return Self::big_o(p, abs);
        }
        let m = abs - v;
        let modulus = ppow(p, m);
        let num = q.numer() / ppow(p, vn);
        let den = q.denom() / ppow(p, vd);
        let d_inv = inv_mod(&den, &modulus).expect("unit denominator");
        Self::make(p, v, num * d_inv, abs)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Valuation; `None` for the exact zero. For `O(p^k)` this is `k` (a lower bound).
    pub fn valuation(&self) -> Option<i64> {
        (!self.exact_zero).then_some(self.val)
    }

    /// Relative precision (number of known unit digits).
    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    /// Absolute precision; `None` for the exact zero.
    pub fn abs_prec(&self) -> Option<i64> {
        (!self.exact_zero).then_some(self.val + self.rel as i64)
    }

    /// True when the value is known to be zero (exactly or modulo its precision).
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.exact_zero || self.rel == 0
    }

    pub fn unit_digits(&self) -> Vec<u64> {
        let mut x = self.unit.clone();
        let pb = BigInt::from(self.p);
        let mut out = Vec::with_capacity(self.rel as usize);
        for _ in 0..self.rel {
            let (q, r) = x.div_mod_floor(&pb);
            out.push(r.try_into().unwrap_or(0));
            x = q;
        }
        out
    }

    /// Drop precision to at most `p^abs`.
    pub fn with_abs_cap(&self, abs: i64) -> Self {
        if self.exact_zero {
            return Self::big_o(self.p, abs);
        }
        let cur = self.val + self.rel as i64;
        if abs >= cur {
            return self.clone();
        }
        Self::make(self.p, self.val, self.unit.clone(), abs)
    }

    /// Representative in `[0, p^k)` of a p-integral value modulo `p^k`.
    pub fn residue(&self, k: i64) -> Result<BigInt> {
        if self.exact_zero {
            return Ok(BigInt::zero());
        }
        if self.abs_prec().unwrap() < k {
            return Err(Error::Precision(format!("value {self} not known mod {}^{k}", self.p)));
        }
        if self.val < 0 {
            return Err(Error::Precision(format!("value {self} is not p-integral")));
        }
        if self.val >= k || self.rel == 0 {
            return Ok(BigInt::zero());
        }
        Ok((&self.unit * ppow(self.p, self.val)).mod_floor(&ppow(self.p, k)))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixing primes");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        if self.exact_zero {
            return o.clone();
        }
        if o.exact_zero {
            return self.clone();
        }
        let abs = self.abs_prec().unwrap().min(o.abs_prec().unwrap());
        let v = self.val.min(o.val);
        let mut x = BigInt::zero();
        if self.rel > 0 {
            x += &self.unit * ppow(self.p, self.val - v);
        }
        if o.rel > 0 {
            x += &o.unit * ppow(self.p, o.val - v);
        }
        Self::make(self.p, v, x, abs)
    }

    pub fn neg(&self) -> Self {
        if self.exact_zero || self.rel == 0 {
            return self.clone();
        }
        let m = ppow(self.p, self.rel as i64);
        PAdicNum { unit: (&m - &self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        if self.exact_zero || o.exact_zero {
            return Self::exact_zero(self.p);
        }
        let v = self.val + o.val;
        if self.rel == 0 || o.rel == 0 {
            return Self::big_o(self.p, v);
        }
        let rel = self.rel.min(o.rel);
        let unit = (&self.unit * &o.unit).mod_floor(&ppow(self.p, rel as i64));
        PAdicNum { p: self.p, exact_zero: false, val: v, unit, rel }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.exact_zero || self.rel == 0 {
            return Err(Error::NotInvertible(format!("{self}")));
        }
        let m = ppow(self.p, self.rel as i64);
        let unit = inv_mod(&self.unit, &m).expect("unit is invertible");
        Ok(PAdicNum { p: self.p, exact_zero: false, val: -self.val, unit, rel: self.rel })
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let prec = self.abs_prec().unwrap_or(1).max(1);
            return Self::from_int(self.p, &BigInt::one(), prec);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by the exact rational `q`.
    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() || self.exact_zero {
            return Self::exact_zero(self.p);
        }
        let vq = vp_int(q.numer(), self.p) - vp_int(q.denom(), self.p);
        let abs = self.abs_prec().unwrap() + vq;
        let qp = Self::from_rational(self.p, q, vq + self.rel.max(1) as i64 + 1);
        let r = self.mul(&qp);
        r.with_abs_cap(abs)
    }
}

impl fmt::Display for PAdicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0");
        }
        let p = self.p;
        let mut parts = Vec::new();
        for (i, d) in self.unit_digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            parts.push(match e {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{e}"),
            });
        }
        parts.push(format!("O({p}^{})", self.val + self.rel as i64));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PAdicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PAdic({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct PAdicRepr {
    p: u64,
    val: Option<i64>,
    digits: Vec<u64>,
    prec: Option<u32>,
}

impl Serialize for PAdicNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = if self.exact_zero {
            PAdicRepr { p: self.p, val: None, digits: vec![], prec: None }
        } else {
            PAdicRepr { p: self.p, val: Some(self.val), digits: self.unit_digits(), prec: Some(self.rel) }
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PAdicRepr::deserialize(d)?;
        match (r.val, r.prec) {
            (Some(v), Some(m)) => {
                let mut x = BigInt::zero();
                for dgt in r.digits.iter().rev() {
                    x = x * BigInt::from(r.p) + BigInt::from(*dgt);
                }
                Ok(PAdicNum::make(r.p, v, x, v + m as i64))
            }
            _ => Ok(PAdicNum::exact_zero(r.p)),
        }
    }
}

/// Teichmuller lift of the residue `a` modulo `p^m`.
pub fn teichmuller(p: u64, a: i64, m: u32) -> Result<PAdicNum> {
    let pb = BigInt::from(p);
    let a = BigInt::from(a);
    if (&a % &pb).is_zero() {
        return Err(Error::NotAUnit { p, value: a.to_string() });
    }
    let modulus = ppow(p, m as i64);
    let mut x = a.mod_floor(&modulus);
    for _ in 0..=m {
        let y = x.modpow(&pb, &modulus);
        if y == x {
            break;
        }
        x = y;
    }
    Ok(PAdicNum::from_int(p, &x, m as i64))
}

/// Multiplicative order of `a` modulo `p`.
pub fn order_mod(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * (a % p) % p;
        k += 1;
        if k > p {
            return 0;
        }
    }
    k
}

/// Smallest residue whose order modulo `p` is exactly `n`.
pub fn default_root_choice(n: u32, p: u64) -> Result<u64> {
    if (p - 1) % n as u64 != 0 {
        return Err(Error::UnsupportedBackend { n_roots: n, p });
    }
    (1..p)
        .find(|&a| order_mod(a, p) == n as u64)
        .ok_or(Error::UnsupportedBackend { n_roots: n, p })
}

/// Embed `x in Q(xi_N)` into `Q_p` sending `xi_N` to the Teichmuller lift of `root_choice`.
pub fn embed(x: &CycRat, p: u64, m: u32, root_choice: u64) -> Result<PAdicNum> {
    let n = x.order();
    if (p - 1) % n as u64 != 0 {
        return Err(Error::UnsupportedBackend { n_roots: n, p });
    }
    if order_mod(root_choice, p) != n as u64 {
        return Err(Error::InvalidArgument(format!(
            "root choice {root_choice} is not a primitive {n}-th root of unity mod {p}"
        )));
    }
    if x.is_zero() {
        return Ok(PAdicNum::exact_zero(p));
    }
    let pb = BigInt::from(p);
    for c in x.coeffs() {
        if (c.denom() % &pb).is_zero() {
            return Err(Error::PDividesDenominator { p, value: c.to_string() });
        }
    }
    let omega = teichmuller(p, root_choice as i64, m)?;
    let mut acc = PAdicNum::exact_zero(p);
    let mut w = PAdicNum::from_int(p, &BigInt::one(), m as i64);
    for c in x.coeffs() {
        if !c.is_zero() {
            acc = acc.add(&w.mul(&PAdicNum::from_rational(p, c, m as i64)));
        }
        w = w.mul(&omega);
    }
    Ok(acc.with_abs_cap(m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::{q_frac, q_int};

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(5, 1, 6).unwrap().residue(6).unwrap(), BigInt::one());
        assert_eq!(teichmuller(5, 2, 2).unwrap().residue(2).unwrap(), BigInt::from(7));
        let w2 = teichmuller(5, 2, 8).unwrap();
        let w4 = teichmuller(5, 4, 8).unwrap();
        assert_eq!(w2.mul(&w2).residue(8).unwrap(), w4.residue(8).unwrap());
        assert!(teichmuller(5, 10, 3).is_err());
    }

    #[test]
    fn embed_examples() {
        // 49/36 mod 5^4: 36^{-1} * 49 reduced by hand-independent check below
        let x = CycRat::from_q(1, q_frac(49, 36));
        let e = embed(&x, 5, 4, 1).unwrap();
        let r = e.residue(4).unwrap();
        assert_eq!((r * BigInt::from(36) - BigInt::from(49)).mod_floor(&BigInt::from(625)), BigInt::zero());
        assert!(embed(&CycRat::zero(1), 5, 4, 1).unwrap().is_exact_zero());
        let xi = CycRat::root_power(4, 1);
        assert_eq!(embed(&xi, 5, 2, 2).unwrap().residue(2).unwrap(), BigInt::from(7));
        assert!(matches!(embed(&xi, 7, 2, 2), Err(Error::UnsupportedBackend { .. })));
        let bad = CycRat::from_q(1, q_frac(1, 5));
        assert!(matches!(embed(&bad, 5, 3, 1), Err(Error::PDividesDenominator { .. })));
    }

    #[test]
    fn precision_tracking() {
        let a = PAdicNum::from_rational(5, &q_int(26), 4);
        let b = PAdicNum::from_rational(5, &q_int(1), 4);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.abs_prec(), Some(4));
        let z = a.sub(&a);
        assert!(z.is_indistinguishable_from_zero());
        assert_eq!(z.abs_prec(), Some(4));
        let x = PAdicNum::from_rational(5, &q_frac(1, 5), 3);
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(x.mul(&x).valuation(), Some(-2));
        assert_eq!(x.inv().unwrap().residue(3).unwrap(), BigInt::from(5));
    }

    #[test]
    fn json_form() {
        let x = PAdicNum::from_rational(5, &q_int(7), 3);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":5,"val":0,"digits":[2,1,0],"prec":3}"#);
        let y: PAdicNum = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z = serde_json::to_string(&PAdicNum::exact_zero(5)).unwrap();
        assert_eq!(z, r#"{"p":5,"val":null,"digits":[],"prec":null}"#);
    }
}
