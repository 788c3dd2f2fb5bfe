//! Scalar backends: exact cyclotomic rationals and precision-tracked p-adics.

pub mod cyclo;
pub mod padic;
pub mod rational;

pub use cyclo::{CycField, CycRat};
pub use padic::{default_root_choice, embed, teichmuller, PAdicNum};
pub use rational::{binomial, binomial_q, Q};

use crate::error::Result;
use serde::Serialize;
use std::fmt;

/// Outcome of testing a value against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroCheck {
    Exact,
    /// Zero modulo `p^k`, nothing known beyond.
    ModPrecision(i64),
    NonZero,
}

/// Context of a p-adic computation: prime and working absolute precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicCtx {
    pub p: u64,
    pub prec: i64,
}

/// Common interface of the two coefficient rings.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static {
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_q(ctx: &Self::Ctx, q: &Q) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// Exactly zero; such terms may be dropped from sparse storage.
    fn is_exact_zero(&self) -> bool;
    fn zero_check(&self) -> ZeroCheck;

    fn from_int(ctx: &Self::Ctx, k: i64) -> Self {
        Self::from_q(ctx, &rational::q_int(k))
    }

    fn scale(&self, q: &Q) -> Self;

    /// Limit the absolute precision to `p^abs`; exact backends ignore this.
    fn cap_precision(&self, _abs: i64) -> Self {
        self.clone()
    }

    /// p-adic valuation when the backend has one (`O(p^k)` reports `k`).
    fn valuation_hint(&self) -> Option<i64> {
        None
    }
}

impl Scalar for CycRat {
    type Ctx = u32;

    fn zero(ctx: &u32) -> Self {
        CycRat::zero(*ctx)
    }
    fn one(ctx: &u32) -> Self {
        CycRat::one(*ctx)
    }
    fn from_q(ctx: &u32, q: &Q) -> Self {
        CycRat::from_q(*ctx, q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        CycRat::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CycRat::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CycRat::mul(self, o)
    }
    fn neg(&self) -> Self {
        CycRat::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        CycRat::inv(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn zero_check(&self) -> ZeroCheck {
        if self.is_zero() {
            ZeroCheck::Exact
        } else {
            ZeroCheck::NonZero
        }
    }
    fn scale(&self, q: &Q) -> Self {
        CycRat::scale(self, q)
    }
}

impl Scalar for PAdicNum {
    type Ctx = PAdicCtx;

    fn zero(ctx: &PAdicCtx) -> Self {
        PAdicNum::exact_zero(ctx.p)
    }
    fn one(ctx: &PAdicCtx) -> Self {
        PAdicNum::from_int(ctx.p, &num_bigint::BigInt::from(1), ctx.prec)
    }
    fn from_q(ctx: &PAdicCtx, q: &Q) -> Self {
        PAdicNum::from_rational(ctx.p, q, ctx.prec)
    }
    fn add(&self, o: &Self) -> Self {
        PAdicNum::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        PAdicNum::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PAdicNum::mul(self, o)
    }
    fn neg(&self) -> Self {
        PAdicNum::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        PAdicNum::inv(self)
    }
    fn is_exact_zero(&self) -> bool {
        PAdicNum::is_exact_zero(self)
    }
    fn zero_check(&self) -> ZeroCheck {
        if self.is_exact_zero() {
            ZeroCheck::Exact
        } else if self.rel_prec() == 0 {
            ZeroCheck::ModPrecision(self.abs_prec().unwrap())
        } else {
            ZeroCheck::NonZero
        }
    }
    fn scale(&self, q: &Q) -> Self {
        PAdicNum::scale(self, q)
    }
    fn cap_precision(&self, abs: i64) -> Self {
        if self.is_exact_zero() {
            PAdicNum::big_o(self.prime(), abs)
        } else {
            self.with_abs_cap(abs)
        }
    }
    fn valuation_hint(&self) -> Option<i64> {
        self.valuation()
    }
}

/// Verdict of an identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Holds exactly.
    Exact,
    /// Holds modulo `p^k` and nothing more is known.
    ModPrecision(i64),
    Fails,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails)
    }

    /// Holds exactly or modulo at least `p^m`.
    pub fn holds_to(&self, m: i64) -> bool {
        match self {
            Verdict::Exact => true,
            Verdict::ModPrecision(k) => *k >= m,
            Verdict::Fails => false,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::ModPrecision(a), Verdict::ModPrecision(b)) => Verdict::ModPrecision(a.min(b)),
            (Verdict::ModPrecision(a), _) | (_, Verdict::ModPrecision(a)) => Verdict::ModPrecision(a),
            _ => Verdict::Exact,
        }
    }
}

impl From<ZeroCheck> for Verdict {
    fn from(z: ZeroCheck) -> Verdict {
        match z {
            ZeroCheck::Exact => Verdict::Exact,
            ZeroCheck::ModPrecision(k) => Verdict::ModPrecision(k),
            ZeroCheck::NonZero => Verdict::Fails,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact => write!(f, "holds exactly"),
            Verdict::ModPrecision(k) => write!(f, "holds mod p^{k}"),
            Verdict::Fails => write!(f, "fails"),
        }
    }
}

/// Verdict for `a == b`.
pub fn compare<S: Scalar>(a: &S, b: &S) -> Verdict {
    a.sub(b).zero_check().into()
}
