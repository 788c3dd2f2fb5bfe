//! Exact arithmetic in the cyclotomic field `Q(xi_N)`.

use super::rational::{q_int, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// The field `Q(xi_N)` with precomputed reductions of `xi^k`, `0 <= k < N`.
#[derive(Debug)]
pub struct CycField {
    n: u32,
    phi: usize,
    /// `powers[k]` is `xi^k` in the power basis `1, xi, ..., xi^(phi-1)`.
    powers: Vec<Vec<BigInt>>,
    /// Monic cyclotomic polynomial, low degree first.
    modulus: Vec<BigInt>,
}

fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].clone();
        if !c.is_zero() {
            for (k, dk) in den.iter().enumerate() {
                r[i + k] -= &c * dk;
            }
        }
        q[i] = c;
    }
    q
}

/// Cyclotomic polynomial `Phi_n`, coefficients low degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

impl CycField {
    fn build(n: u32) -> CycField {
        assert!(n >= 1);
        let modulus = cyclotomic_poly(n);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by xi and reduce
            let top = cur[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..phi {
                next[i] -= &top * &modulus[i];
            }
            cur = next;
        }
        CycField { n, phi, powers, modulus }
    }

    /// Shared handle for `Q(xi_n)`.
    pub fn get(n: u32) -> Arc<CycField> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        map.lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(CycField::build(n)))
            .clone()
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// Element of `Q(xi_N)` in the power basis.
#[derive(Clone)]
pub struct CycRat {
    field: Arc<CycField>,
    coeffs: Vec<Q>,
}

impl PartialEq for CycRat {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}
impl Eq for CycRat {}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycRat[N={}]({})", self.field.n, self)
    }
}

impl CycRat {
    pub fn zero(n: u32) -> Self {
        let field = CycField::get(n);
        let coeffs = vec![Q::zero(); field.phi];
        CycRat { field, coeffs }
    }

    pub fn from_q(n: u32, q: Q) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[0] = q;
        x
    }

    pub fn one(n: u32) -> Self {
        Self::from_q(n, Q::one())
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        Self::from_q(n, q_int(k))
    }

    /// `xi_N^k`.
    pub fn root_power(n: u32, k: i64) -> Self {
        let field = CycField::get(n);
        let idx = k.rem_euclid(n as i64) as usize;
        let coeffs = field.powers[idx].iter().map(|c| Q::from_integer(c.clone())).collect();
        CycRat { field, coeffs }
    }

    /// Build from coefficients in the power basis (length at most `phi(N)`).
    pub fn from_coeffs(n: u32, coeffs: Vec<Q>) -> Result<Self> {
        let mut x = Self::zero(n);
        if coeffs.len() > x.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients exceed phi({n}) = {}",
                coeffs.len(),
                x.coeffs.len()
            )));
        }
        for (i, c) in coeffs.into_iter().enumerate() {
            x.coeffs[i] = c;
        }
        Ok(x)
    }

    pub fn order(&self) -> u32 {
        self.field.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field.n, other.field.n, "mixing cyclotomic fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycRat { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycRat { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        CycRat { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        CycRat { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let phi = self.field.phi;
        if phi == 1 {
            return CycRat {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut prod = vec![Q::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.reduce(prod)
    }

    fn reduce(&self, mut prod: Vec<Q>) -> Self {
        let phi = self.field.phi;
        let m = &self.field.modulus;
        for i in (phi..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for k in 0..phi {
                if !m[k].is_zero() {
                    prod[i - phi + k] -= &c * Q::from_integer(m[k].clone());
                }
            }
        }
        prod.truncate(phi);
        CycRat { field: self.field.clone(), coeffs: prod }
    }

    /// Multiply by `xi^k`.
    pub fn mul_root_power(&self, k: i64) -> Self {
        if self.field.phi == 1 {
            return self.clone();
        }
        let idx = k.rem_euclid(self.field.n as i64) as usize;
        if idx == 0 {
            return self.clone();
        }
        let p = &self.field.powers[idx];
        let r = CycRat {
            field: self.field.clone(),
            coeffs: p.iter().map(|c| Q::from_integer(c.clone())).collect(),
        };
        self.mul(&r)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse via the norm-free route of solving `x * y = 1`
    /// as a linear system over `Q`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero in Q(xi_N)".into()));
        }
        let phi = self.field.phi;
        if phi == 1 {
            return Ok(CycRat {
                field: self.field.clone(),
                coeffs: vec![Q::one() / &self.coeffs[0]],
            });
        }
        // column j = self * xi^j
        let mut mat: Vec<Vec<Q>> = vec![vec![Q::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.mul_root_power(j as i64);
            for i in 0..phi {
                mat[i][j] = col.coeffs[i].clone();
            }
        }
        mat[0][phi] = Q::one();
        for c in 0..phi {
            let piv = (c..phi).find(|&r| !mat[r][c].is_zero()).ok_or_else(|| {
                Error::NotInvertible("singular multiplication matrix".into())
            })?;
            mat.swap(c, piv);
            let inv = Q::one() / &mat[c][c];
            for k in c..=phi {
                mat[c][k] = &mat[c][k] * &inv;
            }
            for r in 0..phi {
                if r != c && !mat[r][c].is_zero() {
                    let f = mat[r][c].clone();
                    for k in c..=phi {
                        let t = &f * &mat[c][k];
                        mat[r][k] -= t;
                    }
                }
            }
        }
        let coeffs = mat.into_iter().map(|row| row[phi].clone()).collect();
        Ok(CycRat { field: self.field.clone(), coeffs })
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*xi")?,
                _ => write!(f, "({c})*xi^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycRatRepr {
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycRatRepr { n: self.field.n, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CycRatRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| s.parse::<Q>().map_err(|e| D::Error::custom(format!("{s}: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycRat::from_coeffs(r.n, coeffs).map_err(D::Error::custom)
    }
}
