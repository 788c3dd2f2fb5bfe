//! Multiple harmonic sums (plain, with reversals, localized), hyperlogarithm
//! coefficients, and the elimination of localized sums into polynomials times
//! ordinary sums.

use crate::error::{Error, Result};
use crate::scalars::rational::{binomial, faulhaber_poly, q_int, QPoly, Q};
use crate::scalars::{embed, CycRat, PAdicNum, Scalar};
use crate::words::{HarmonicWord, HarmonicWordLoc, HarmonicWordWR, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

/// A function on harmonic words; absent keys are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoeffs<S: Scalar> {
    pub n_roots: u32,
    terms: BTreeMap<HarmonicWordLoc, S>,
}

impl<S: Scalar> HarmonicCoeffs<S> {
    pub fn new(n_roots: u32) -> Self {
        HarmonicCoeffs { n_roots, terms: BTreeMap::new() }
    }

    pub fn insert(&mut self, w: HarmonicWordLoc, x: S) {
        if x.is_exact_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, x);
        }
    }

    pub fn get(&self, w: &HarmonicWordLoc) -> Option<&S> {
        self.terms.get(w)
    }

    pub fn get_or_zero(&self, w: &HarmonicWordLoc, ctx: &S::Ctx) -> S {
        self.terms.get(w).cloned().unwrap_or_else(|| S::zero(ctx))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HarmonicWordLoc, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(w, x)| serde_json::json!({"word": w.to_string(), "value": x}))
            .collect();
        serde_json::json!({"N": self.n_roots, "terms": terms})
    }
}

fn check_n(n: i64) -> Result<()> {
    if n <= 0 {
        Err(Error::NonPositiveIndex(n))
    } else {
        Ok(())
    }
}

/// `m^{-x} (n-m)^{-y}` for `0 < m < n`.
fn monomial(m: i64, n: i64, x: i64, y: i64) -> Q {
    let pw = |b: i64, e: i64| -> Q {
        if e >= 0 {
            Q::from_integer(BigInt::from(b).pow(e as u32))
        } else {
            Q::new(BigInt::one(), BigInt::from(b).pow((-e) as u32))
        }
    };
    pw(m, -x) * pw(n - m, -y)
}

/// `frak_h_n(w) = xi^{-j_{d+1} n} sum_{0<n_1<...<n_d<n} prod xi^{eta_i n_i} n_i^{-u_i} (n-n_i)^{-u'_i}`.
pub fn frak_h(n: i64, w: &HarmonicWordLoc, n_roots: u32) -> Result<CycRat> {
    check_n(n)?;
    let d = w.entries.len();
    if w.j.len() != d + 1 {
        return Err(Error::InvalidWord(format!("{w}: root list has wrong length")));
    }
    let prefactor = CycRat::root_power(n_roots, -(w.j[0] as i64) * n);
    if d == 0 {
        return Ok(prefactor);
    }
    // acc[m] for the current position, m = 1..n-1
    let mut prefix = vec![CycRat::one(n_roots); n as usize];
    for k in (0..d).rev() {
        let (x, y) = w.entries[k];
        let eta = w.j[k] as i64 - w.j[k + 1] as i64;
        let mut next = vec![CycRat::zero(n_roots); n as usize];
        let mut running = CycRat::zero(n_roots);
        for m in 1..n {
            next[m as usize] = running.clone();
            let base = &prefix[m as usize];
            if !base.is_zero() {
                let t = base.scale(&monomial(m, n, x, y)).mul_root_power(eta * m);
                running = running.add(&t);
            }
        }
        if k == 0 {
            return Ok(running.mul(&prefactor));
        }
        prefix = next;
    }
    unreachable!()
}

/// `frak_h_n(w)` for `n = 1..=n_max` at once, for plain words.
pub fn frak_h_table(n_max: i64, w: &HarmonicWord, n_roots: u32) -> Vec<CycRat> {
    let d = w.s.len();
    let size = n_max as usize + 1;
    // prefix[m] = sum over inner positions with all variables < m
    let mut prefix = vec![CycRat::one(n_roots); size + 1];
    for k in (0..d).rev() {
        let eta = w.j[k] as i64 - w.j[k + 1] as i64;
        let s = w.s[k] as i64;
        let mut next = vec![CycRat::zero(n_roots); size + 1];
        let mut running = CycRat::zero(n_roots);
        for m in 1..=size {
            next[m] = running.clone();
            let base = &prefix[m];
            if !base.is_zero() {
                let t = base.scale(&monomial(m as i64, 0, s, 0)).mul_root_power(eta * m as i64);
                running = running.add(&t);
            }
        }
        prefix = next;
    }
    (1..=n_max)
        .map(|n| {
            let v = if d == 0 { CycRat::one(n_roots) } else { prefix[n as usize].clone() };
            v.mul_root_power(-(w.j[0] as i64) * n)
        })
        .collect()
}

/// `har_n(w) = n^{weight(w)} frak_h_n(w)`.
pub fn har(n: i64, w: &HarmonicWordLoc, n_roots: u32) -> Result<CycRat> {
    let h = frak_h(n, w, n_roots)?;
    Ok(h.scale(&q_pow(n, w.weight())))
}

/// `n^e` as a rational, `e` of either sign.
pub fn q_pow(n: i64, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::from(n).pow(e as u32))
    } else {
        Q::new(BigInt::one(), BigInt::from(n).pow((-e) as u32))
    }
}

/// `har_n` on every listed word.
pub fn har_coeffs(n: i64, words: &[HarmonicWordLoc], n_roots: u32) -> Result<HarmonicCoeffs<CycRat>> {
    let mut out = HarmonicCoeffs::new(n_roots);
    for w in words {
        out.insert(w.clone(), har(n, w, n_roots)?);
    }
    Ok(out)
}

/// Plain harmonic words of weight at most `max_weight` and depth at most `max_depth` (depth >= 1).
pub fn harmonic_words(n_roots: u32, max_weight: u32, max_depth: usize) -> Vec<HarmonicWord> {
    fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 1..=total {
            for mut rest in compositions(total - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for d in 1..=max_depth {
        for wt in d as u32..=max_weight {
            for s in compositions(wt, d) {
                let nj = (n_roots as u64).pow(d as u32 + 1);
                for code in 0..nj {
                    let mut c = code;
                    let mut j = Vec::with_capacity(d + 1);
                    for _ in 0..=d {
                        j.push((c % n_roots as u64) as u32 + 1);
                        c /= n_roots as u64;
                    }
                    out.push(HarmonicWord { s: s.clone(), j });
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Hyperlogarithm coefficients

/// Coefficients `Li[w][z^n]` for `n = 0..=n_max` under `Li[e_{z_j} w'] = int dz/(z_j - z) Li[w']`.
pub fn li_coeffs(w: &Word, n_max: usize, n_roots: u32) -> Vec<CycRat> {
    let mut c = vec![CycRat::zero(n_roots); n_max + 1];
    c[0] = CycRat::one(n_roots);
    for &a in w.letters().iter().rev() {
        let mut next = vec![CycRat::zero(n_roots); n_max + 1];
        if a == 0 {
            for n in 1..=n_max {
                next[n] = c[n].scale(&Q::new(BigInt::one(), BigInt::from(n)));
            }
        } else {
            // next[n] = (1/n) sum_{m<n} xi^{-a (n-m)} c[m]
            let mut running = CycRat::zero(n_roots);
            for n in 1..=n_max {
                running = running.add(&c[n - 1]).mul_root_power(-(a as i64));
                next[n] = running.scale(&Q::new(BigInt::one(), BigInt::from(n)));
            }
        }
        c = next;
    }
    c
}

/// `Li[w][z^n]`.
pub fn li_coeff(w: &Word, n: i64, n_roots: u32) -> Result<CycRat> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("negative series index {n}")));
    }
    Ok(li_coeffs(w, n as usize, n_roots).pop().unwrap())
}

/// Harmonic word with reversals whose `frak_h_n` is `(Li[w_1] Li[w_2])[z^n]` (`N = 1`).
pub fn li_product_word(w1: &HarmonicWord, w2: &HarmonicWord) -> Result<HarmonicWordWR> {
    if w1.s.is_empty() || w2.s.is_empty() {
        return Err(Error::InvalidWord("both factors need depth >= 1".into()));
    }
    let mut entries: Vec<(u32, u32)> = w2.s[1..].iter().rev().map(|&t| (0, t)).collect();
    entries.push((w1.s[0], w2.s[0]));
    entries.extend(w1.s[1..].iter().map(|&s| (s, 0)));
    let d = entries.len();
    Ok(HarmonicWordWR { entries, j: vec![1; d + 1] })
}

// ---------------------------------------------------------------------------
// Elimination of localized sums

/// Tag carried by an entry through elimination.
pub type Tag = Option<usize>;

/// Key of an eliminated term: surviving entries, their tags, and the power of `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElimKey {
    pub entries: Vec<(i64, i64)>,
    pub tags: Vec<Tag>,
    pub npow: i64,
}

struct Item {
    coef: Q,
    npow: i64,
    entries: Vec<(i64, i64)>,
    tags: Vec<Tag>,
}

fn is_poly(e: (i64, i64)) -> bool {
    e.0 <= 0 && e.1 == 0
}

/// Rewrite `sum_{0<u_1<...<u_d<n} prod u_i^{-x_i} (n-u_i)^{-y_i}` (entries outer-first, `N = 1`)
/// as `sum coef * n^npow * frak_h_n(surviving entries)` with all surviving entries non-negative
/// and nonzero.
pub fn eliminate(entries: &[(i64, i64)], tags: &[Tag]) -> BTreeMap<ElimKey, Q> {
    let mut out: BTreeMap<ElimKey, Q> = BTreeMap::new();
    let mut stack = vec![Item { coef: Q::one(), npow: 0, entries: entries.to_vec(), tags: tags.to_vec() }];
    while let Some(it) = stack.pop() {
        if it.coef.is_zero() {
            continue;
        }
        // normalize one offending entry
        if let Some(k) = it.entries.iter().position(|&(x, y)| y < 0 || (x < 0 && y > 0)) {
            let (x, y) = it.entries[k];
            if y < 0 {
                let c = -y;
                for i in 0..=c {
                    let mut e = it.entries.clone();
                    e[k] = (x - i, 0);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    stack.push(Item {
                        coef: &it.coef * Q::from_integer(binomial(c, i as u32) * sign),
                        npow: it.npow + c - i,
                        entries: e,
                        tags: it.tags.clone(),
                    });
                }
            } else {
                let a = -x;
                for i in 0..=a {
                    let mut e = it.entries.clone();
                    e[k] = (0, y - i);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    stack.push(Item {
                        coef: &it.coef * Q::from_integer(binomial(a, i as u32) * sign),
                        npow: it.npow + a - i,
                        entries: e,
                        tags: it.tags.clone(),
                    });
                }
            }
            continue;
        }
        // eliminate the innermost polynomial position
        let Some(t) = it.entries.iter().rposition(|&e| is_poly(e)) else {
            let key = ElimKey { entries: it.entries, tags: it.tags, npow: it.npow };
            let slot = out.entry(key).or_insert_with(Q::zero);
            *slot += it.coef;
            continue;
        };
        let k = (-it.entries[t].0) as usize;
        let f = faulhaber_poly(k);
        let mut rest = it.entries.clone();
        rest.remove(t);
        let mut rest_tags = it.tags.clone();
        rest_tags.remove(t);
        // F_k(outer bound)
        for (c, fc) in f.0.iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            let mut e = rest.clone();
            let mut npow = it.npow;
            if t == 0 {
                npow += c as i64;
            } else {
                e[t - 1].0 -= c as i64;
            }
            stack.push(Item { coef: &it.coef * fc, npow, entries: e, tags: rest_tags.clone() });
        }
        // -(F_k(a) + a^k) at the inner bound a
        if t < it.entries.len() - 1 {
            for c in 0..=k + 1 {
                let mut g = f.coeff(c);
                if c == k {
                    g += Q::one();
                }
                if g.is_zero() {
                    continue;
                }
                let mut e = rest.clone();
                e[t].0 -= c as i64;
                stack.push(Item {
                    coef: -(&it.coef * g),
                    npow: it.npow,
                    entries: e,
                    tags: rest_tags.clone(),
                });
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Decomposition of a localized sum: `(entries, npow) -> coefficient`.
pub type LocDecomposition = BTreeMap<(Vec<(i64, i64)>, i64), Q>;

/// Untagged [`eliminate`].
pub fn localized_decompose(entries: &[(i64, i64)]) -> LocDecomposition {
    let mut out: LocDecomposition = BTreeMap::new();
    for (k, v) in eliminate(entries, &vec![None; entries.len()]) {
        *out.entry((k.entries, k.npow)).or_insert_with(Q::zero) += v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Evaluate a decomposition at `n`.
pub fn eval_decomposition(dec: &LocDecomposition, n: i64) -> Result<Q> {
    let mut acc = Q::zero();
    for ((entries, npow), c) in dec {
        let w = HarmonicWordLoc { entries: entries.clone(), j: vec![1; entries.len() + 1] };
        let h = frak_h(n, &w, 1)?;
        acc += c * q_pow(n, *npow) * h.as_rational().unwrap();
    }
    Ok(acc)
}

/// The coefficients `B_b^{l_1,...,l_d}` of `frak_h_n(-l_d, ..., -l_1) = sum_b B_b n^b`.
///
/// Tuples are given innermost first, `(l_1, ..., l_d)`. The constant term `b = 0` is kept.
#[derive(Debug, Default)]
pub struct BTable {
    cache: RwLock<HashMap<Vec<i64>, QPoly>>,
    max_entry: i64,
}

impl BTable {
    pub fn new(max_entry: i64) -> Self {
        BTable { cache: RwLock::new(HashMap::new()), max_entry }
    }

    /// Polynomial `frak_h_n(-l_d, ..., -l_1)` in `n`.
    pub fn poly(&self, l: &[i64]) -> Result<QPoly> {
        if let Some(&bad) = l.iter().find(|&&x| x < 0 || x > self.max_entry) {
            return Err(Error::Bound(format!("exponent {bad} outside 0..={}", self.max_entry)));
        }
        if let Some(p) = self.cache.read().unwrap().get(l) {
            return Ok(p.clone());
        }
        let entries: Vec<(i64, i64)> = l.iter().rev().map(|&x| (-x, 0)).collect();
        let dec = localized_decompose(&entries);
        let deg = l.iter().sum::<i64>() as usize + l.len();
        let mut c = vec![Q::zero(); deg + 1];
        for ((e, npow), v) in dec {
            if !e.is_empty() {
                return Err(Error::Inconsistent(format!("polynomial sum left an MHS part {e:?}")));
            }
            c[npow as usize] += v;
        }
        let p = QPoly(c);
        self.cache.write().unwrap().insert(l.to_vec(), p.clone());
        Ok(p)
    }

    /// `B_b^{l_1,...,l_d}`.
    pub fn b_coeff(&self, b: usize, l: &[i64]) -> Result<Q> {
        Ok(self.poly(l)?.coeff(b))
    }

    pub fn to_json(&self, l: &[i64]) -> Result<serde_json::Value> {
        let p = self.poly(l)?;
        Ok(serde_json::json!({
            "l": l,
            "coeffs": p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }))
    }
}

/// `B_b^{l}` with a shared default table.
pub fn b_coeff(b: usize, l: &[i64]) -> Result<Q> {
    static TABLE: std::sync::OnceLock<BTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| BTable::new(64)).b_coeff(b, l)
}

// ---------------------------------------------------------------------------
// Reversal reduction at prime-power index

/// Terms of `har_q(w) = sum_{l'} prod (-1)^{u'_i + l'_i} C(-u'_i, l'_i) har_q(u_i + u'_i + l'_i)`
/// with `sum l' <= max_extra`, valid for `q` a prime power.
///
/// Each term has valuation at least `weight(w) + sum l'` when `v_p(har_q(v)) >= weight(v)`.
pub fn reversal_reduction_terms(w: &HarmonicWordWR, max_extra: u32) -> Vec<(Q, HarmonicWord)> {
    fn rec(entries: &[(u32, u32)], budget: u32, coef: Q, acc: &mut Vec<u32>, out: &mut Vec<(Q, Vec<u32>)>) {
        let Some((&(u, ur), rest)) = entries.split_first() else {
            out.push((coef, acc.clone()));
            return;
        };
        let top = if ur == 0 { 0 } else { budget };
        for l in 0..=top {
            let sign = if (ur + l) % 2 == 0 { 1 } else { -1 };
            let c = &coef * Q::from_integer(binomial(-(ur as i64), l) * sign);
            acc.push(u + ur + l);
            rec(rest, budget - l, c, acc, out);
            acc.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&w.entries, max_extra, Q::one(), &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|(c, s)| (c, HarmonicWord { s, j: w.j.clone() }))
        .collect()
}

// ---------------------------------------------------------------------------
// Indexed families

/// Index set of a harmonic family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IndexSet {
    All,
    List(Vec<u64>),
    Progression { start: u64, step: u64 },
}

impl IndexSet {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            IndexSet::All => n >= 1,
            IndexSet::List(v) => v.contains(&n),
            IndexSet::Progression { start, step } => {
                n >= *start && (*step == 0 && n == *start || *step > 0 && (n - start) % step == 0)
            }
        }
    }
}

type Evaluator<S> = dyn Fn(u64, &HarmonicWordLoc) -> Result<S> + Send + Sync;

/// Lazily evaluated family `(h_n)_{n in I}` of harmonic coefficient systems.
pub struct HarmonicSeq<S: Scalar> {
    pub index: IndexSet,
    pub n_roots: u32,
    eval: Arc<Evaluator<S>>,
    memo: RwLock<HashMap<(u64, HarmonicWordLoc), S>>,
}

impl<S: Scalar> fmt::Debug for HarmonicSeq<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HarmonicSeq({:?}, N={})", self.index, self.n_roots)
    }
}

impl<S: Scalar> HarmonicSeq<S> {
    pub fn new(
        index: IndexSet,
        n_roots: u32,
        eval: impl Fn(u64, &HarmonicWordLoc) -> Result<S> + Send + Sync + 'static,
    ) -> Self {
        HarmonicSeq { index, n_roots, eval: Arc::new(eval), memo: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, n: u64, w: &HarmonicWordLoc) -> Result<S> {
        if !self.index.contains(n) {
            return Err(Error::Bound(format!("index {n} outside {:?}", self.index)));
        }
        let key = (n, w.clone());
        if let Some(x) = self.memo.read().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let x = (self.eval)(n, w)?;
        self.memo.write().unwrap().insert(key, x.clone());
        Ok(x)
    }

    pub fn coeffs(&self, n: u64, words: &[HarmonicWordLoc]) -> Result<HarmonicCoeffs<S>> {
        let mut out = HarmonicCoeffs::new(self.n_roots);
        for w in words {
            out.insert(w.clone(), self.get(n, w)?);
        }
        Ok(out)
    }
}

/// Exact `har_n`, optionally reindexed at `m * n`.
pub fn har_seq_exact(index: IndexSet, n_roots: u32, shift: u64) -> HarmonicSeq<CycRat> {
    HarmonicSeq::new(index, n_roots, move |n, w| har((n * shift) as i64, w, n_roots))
}

/// `har_{m n}` embedded in `Q_p` with absolute precision `prec`.
pub fn har_seq_padic(
    index: IndexSet,
    n_roots: u32,
    shift: u64,
    p: u64,
    prec: i64,
    root_choice: u64,
) -> HarmonicSeq<PAdicNum> {
    HarmonicSeq::new(index, n_roots, move |n, w| {
        let x = har((n * shift) as i64, w, n_roots)?;
        embed_any(&x, p, prec, root_choice)
    })
}

/// Embedding that tolerates `p` in denominators (values of negative valuation).
pub fn embed_any(x: &CycRat, p: u64, prec: i64, root_choice: u64) -> Result<PAdicNum> {
    if let Some(q) = x.as_rational() {
        return Ok(PAdicNum::from_rational(p, q, prec));
    }
    // clear p from denominators, embed, then divide back
    let mut v = 0i64;
    for c in x.coeffs() {
        if let Some(val) = crate::scalars::rational::vp_q(c, p) {
            v = v.min(val);
        }
    }
    let scaled = x.scale(&q_pow(p as i64, -v));
    let e = embed(&scaled, p, (prec - v).max(1) as u32, root_choice)?;
    Ok(e.scale(&q_pow(p as i64, v)).with_abs_cap(prec))
}

/// CSV rows `n,word,value` for the given words and range.
pub fn table_csv(n_range: std::ops::RangeInclusive<i64>, words: &[HarmonicWordLoc], n_roots: u32) -> Result<String> {
    let mut out = String::from("n,word,value\n");
    for n in n_range {
        for w in words {
            out.push_str(&format!("{n},\"{w}\",{}\n", frak_h(n, w, n_roots)?));
        }
    }
    Ok(out)
}

/// Rational helper used by tests and callers.
pub fn frak_h_q(n: i64, w: &HarmonicWordLoc) -> Result<Q> {
    Ok(frak_h(n, w, 1)?.as_rational().cloned().unwrap_or_else(|| q_int(0)))
}
