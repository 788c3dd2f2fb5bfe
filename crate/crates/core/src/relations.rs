//! Checkers for the algebraic relations between harmonic sums, adjoint
//! coefficients and group-like series, together with finite rank experiments.
//!
//! Every checker evaluates both sides of its identity independently and
//! returns a [`RelationReport`]; a failing report carries both side values.

use crate::error::{Error, Result};
use crate::ihara::AdjointCoeffs;
use crate::mhs::{frak_h_table, HarmonicCoeffs, HarmonicSeq};
use crate::ncseries::{quasi_shuffle_harmonic, NCSeries};
use crate::scalars::rational::{binomial, Q};
use crate::scalars::{Scalar, Verdict, ZeroCheck};
use crate::words::{HarmonicWord, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::HashMap;

/// Outcome of one relation check.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub instance: Value,
    pub verdict: Verdict,
    /// First failing instance with both side values.
    pub witness: Option<Value>,
    /// Number of identities evaluated.
    pub checked: usize,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    /// One JSON line `{"relation":..,"instance":..,"verdict":..,"witness":..}`.
    pub fn to_json_line(&self) -> String {
        json!({
            "relation": self.relation,
            "instance": self.instance,
            "verdict": self.verdict.to_string(),
            "witness": self.witness,
            "checked": self.checked,
        })
        .to_string()
    }
}

/// Accumulates side-by-side comparisons into a report.
struct Tally {
    verdict: Verdict,
    witness: Option<Value>,
    checked: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { verdict: Verdict::Exact, witness: None, checked: 0 }
    }

    fn compare<S: Scalar>(&mut self, lhs: &S, rhs: &S, at: impl FnOnce() -> Value) {
        self.checked += 1;
        let z = lhs.sub(rhs).zero_check();
        self.verdict = self.verdict.and(z.into());
        if z == ZeroCheck::NonZero && self.witness.is_none() {
            self.witness = Some(json!({"at": at(), "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
        }
    }

    fn flag(&mut self, ok: bool, at: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.verdict = Verdict::Fails;
            if self.witness.is_none() {
                self.witness = Some(at());
            }
        }
    }

    fn report(self, relation: &str, instance: Value) -> RelationReport {
        RelationReport {
            relation: relation.to_string(),
            instance,
            verdict: self.verdict,
            witness: self.witness,
            checked: self.checked,
        }
    }
}

fn text(w: &Word) -> String {
    w.to_text(1)
}

// ---------------------------------------------------------------------------
// Shuffle and quasi-shuffle

/// `f[u] f[v] = f[u ш v]` for all nonempty `u, v` within the truncation, and `f[∅] = 1`.
pub fn check_shuffle<S: Scalar>(f: &NCSeries<S>) -> RelationReport {
    let (verdict, w) = f.shuffle_equation_check(false);
    let witness = w.map(|(u, v, l, r)| {
        json!({"at": [u.to_text(f.n_roots()), v.to_text(f.n_roots())], "lhs": l.to_string(), "rhs": r.to_string()})
    });
    RelationReport {
        relation: "shuffle".into(),
        instance: json!({"max_weight": f.max_weight(), "n_roots": f.n_roots()}),
        verdict,
        witness,
        checked: f.shuffle_pairs().len(),
    }
}

/// Pairs `(a, b)`, `a <= b`, of harmonic words with combined weight and depth within bounds.
pub fn stuffle_pairs(n_roots: u32, max_weight: u32, max_depth: usize) -> Vec<(HarmonicWord, HarmonicWord)> {
    let words = crate::mhs::harmonic_words(n_roots, max_weight.saturating_sub(1), max_depth.saturating_sub(1));
    let mut out = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i..] {
            if a.weight() + b.weight() <= max_weight && a.depth() + b.depth() <= max_depth {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// `h(a) h(b) = h(a * b)` on the given pairs.
pub fn check_quasi_shuffle_fn<S: Scalar>(
    pairs: &[(HarmonicWord, HarmonicWord)],
    n_roots: u32,
    ctx: &S::Ctx,
    h: impl Fn(&HarmonicWord) -> Result<S> + Sync,
) -> Result<RelationReport> {
    let mut t = Tally::new();
    for (a, b) in pairs {
        let lhs = h(a)?.mul(&h(b)?);
        let mut rhs = S::zero(ctx);
        for (w, c) in quasi_shuffle_harmonic(a, b, n_roots)? {
            rhs = rhs.add(&h(&w)?.scale(&Q::from_integer(c.into())));
        }
        t.compare(&lhs, &rhs, || json!([a.to_string(), b.to_string()]));
    }
    Ok(t.report("quasi-shuffle", json!({"pairs": pairs.len(), "n_roots": n_roots})))
}

/// `h_n(a) h_n(b) = h_n(a * b)` on the given pairs for every `n` in `ns`; each product is
/// expanded once and pairs are checked in parallel.
pub fn check_quasi_shuffle_seq<S: Scalar>(
    pairs: &[(HarmonicWord, HarmonicWord)],
    n_roots: u32,
    ctx: &S::Ctx,
    ns: &[u64],
    h: impl Fn(u64, &HarmonicWord) -> Result<S> + Sync,
) -> Result<RelationReport> {
    let per_pair: Vec<Tally> = pairs
        .par_iter()
        .map(|(a, b)| -> Result<Tally> {
            let prod: Vec<(HarmonicWord, Q)> = quasi_shuffle_harmonic(a, b, n_roots)?
                .into_iter()
                .map(|(w, c)| (w, Q::from_integer(c.into())))
                .collect();
            let mut t = Tally::new();
            for &n in ns {
                let lhs = h(n, a)?.mul(&h(n, b)?);
                let mut rhs = S::zero(ctx);
                for (w, c) in &prod {
                    rhs = rhs.add(&h(n, w)?.scale(c));
                }
                t.compare(&lhs, &rhs, || json!({"n": n, "pair": [a.to_string(), b.to_string()]}));
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut t = Tally::new();
    for p in per_pair {
        t.checked += p.checked;
        t.verdict = t.verdict.and(p.verdict);
        if t.witness.is_none() {
            t.witness = p.witness;
        }
    }
    Ok(t.report("quasi-shuffle", json!({"pairs": pairs.len(), "n_roots": n_roots, "ns": ns})))
}

/// `h(a) h(b) = h(a * b)` on all pairs of stored words whose products are stored.
pub fn check_quasi_shuffle<S: Scalar>(h: &HarmonicCoeffs<S>, ctx: &S::Ctx) -> Result<RelationReport> {
    let n = h.n_roots;
    let words: Vec<HarmonicWord> = h.iter().filter_map(|(w, _)| w.to_plain()).filter(|w| w.depth() > 0).collect();
    let mut pairs = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i..] {
            let prod = quasi_shuffle_harmonic(a, b, n)?;
            if prod.keys().all(|w| h.get(&w.to_loc()).is_some()) {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    check_quasi_shuffle_fn(&pairs, n, ctx, |w| {
        h.get(&w.to_loc()).cloned().ok_or_else(|| Error::Bound(format!("missing {w}")))
    })
}

fn y(s: usize) -> Vec<u8> {
    let mut v = vec![0u8; s - 1];
    v.push(1);
    v
}

fn cat(parts: &[&[u8]]) -> Word {
    Word(parts.concat())
}

/// Adjoint quasi-shuffle in depth `(1,1)`:
/// `a[e_0^b e_1 y_{s2} y_{s1}] + a[e_0^b e_1 y_{s1} y_{s2}] + a[e_0^b e_1 y_{s1+s2}]
///  = sum_{b'+b''=b} a[e_0^{b'} e_1 y_{s1}] a[e_0^{b''} e_1 y_{s2}]`
/// with `y_s = e_0^{s-1} e_1`, for `s1 <= s2` and `s1 + s2 + b <= max_total`.
pub fn check_adjoint_quasi_shuffle<S: Scalar>(a: &AdjointCoeffs<S>, max_total: usize) -> RelationReport {
    let mut t = Tally::new();
    let ctx = a.series.ctx().clone();
    for s1 in 1..max_total {
        for s2 in s1..max_total {
            for b in 0..=max_total.saturating_sub(s1 + s2) {
                if s1 + s2 + b > max_total {
                    continue;
                }
                let (y1, y2) = (y(s1), y(s2));
                let lhs = a
                    .get(b, &cat(&[&y2, &y1]))
                    .add(&a.get(b, &cat(&[&y1, &y2])))
                    .add(&a.get(b, &Word(y(s1 + s2))));
                let mut rhs = S::zero(&ctx);
                for b1 in 0..=b {
                    rhs = rhs.add(&a.get(b1, &Word(y1.clone())).mul(&a.get(b - b1, &Word(y2.clone()))));
                }
                let rhs = match a.tail_valuation {
                    Some(tv) => rhs.cap_precision(tv),
                    None => rhs,
                };
                t.compare(&lhs, &rhs, || json!({"b": b, "s1": s1, "s2": s2}));
            }
        }
    }
    t.report("adjoint-quasi-shuffle", json!({"max_total": max_total}))
}

// ---------------------------------------------------------------------------
// Duality

/// `a -> e_0 + a(e_0, e_1) + a(e_0, e_inf)` with `e_inf = -e_0 - e_1`.
pub fn special_automorphism_defect<S: Scalar>(a: &NCSeries<S>) -> Result<NCSeries<S>> {
    let e0 = a.word(Word(vec![0]));
    let einf = e0.add(&a.word(Word(vec![1])))?.neg();
    let twisted = a.substitute(&[e0.clone(), einf])?;
    a.add(&twisted)?.add(&e0)
}

fn words_ending_e1(max_weight: usize) -> Vec<Word> {
    Word::enumerate(1, max_weight, None)
        .into_iter()
        .filter(|w| w.0.last() == Some(&1))
        .collect()
}

/// Prime harmonic duality in coefficient form, for `A_b(w) = a[e_0^b e_1 w]`:
/// `A_b(w(e_0 - e_1, -e_1)) = sum_z (-1)^depth(z) A_{b - wt z}(z w)` over `z` ending in `e_1`
/// or empty, for every `w` in `words` and `b + 1 + wt(w) <= max_weight`.
/// With `h(w) = (-1)^depth(w) sum_b Lambda^{b + wt w} A_b(w)` this reads
/// `h(w(e_0 + e_1, -e_1)) = sum_z h(z w)`, graded by the Lambda-degree.
pub fn check_prime_harmonic_duality<S: Scalar>(
    a: &NCSeries<S>,
    words: &[Word],
    max_weight: usize,
) -> Result<RelationReport> {
    let ctx = a.ctx().clone();
    let coeff = |b: usize, v: &Word| -> S {
        let mut full = vec![0u8; b];
        full.push(1);
        full.extend_from_slice(&v.0);
        a.get(&Word(full))
    };
    let e0 = a.word(Word(vec![0]));
    let e1 = a.word(Word(vec![1]));
    let sub_images = [e0.sub(&e1)?, e1.neg()];
    let mut t = Tally::new();
    for w in words {
        let image = a.empty_like().word(w.clone()).substitute(&sub_images)?;
        for b in 0..max_weight.saturating_sub(w.weight()) {
            let mut lhs = S::zero(&ctx);
            for (v, c) in image.terms() {
                lhs = lhs.add(&c.mul(&coeff(b, v)));
            }
            let mut rhs = coeff(b, w);
            for z in words_ending_e1(b) {
                let x = coeff(b - z.weight(), &z.concat(w));
                rhs = if z.depth() % 2 == 0 { rhs.add(&x) } else { rhs.sub(&x) };
            }
            t.compare(&lhs, &rhs, || json!({"w": text(w), "b": b}));
        }
    }
    Ok(t.report("prime-harmonic-duality", json!({"words": words.len(), "max_weight": max_weight})))
}

// ---------------------------------------------------------------------------
// Linear algebra

/// Rank of an integer matrix modulo the prime `p < 2^32`.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    rank_mod_p_reduced(&mut m, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn rank_mod_p_reduced(m: &mut [Vec<u64>], p: u64) -> usize {
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for c in col..n_cols {
            m[rank][c] = (m[rank][c] as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot_row = m[rank].clone();
        for r in 0..m.len() {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let f = m[r][col];
            for c in col..n_cols {
                let sub = (f as u128 * pivot_row[c] as u128 % p as u128) as u64;
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn q_mod_p(x: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = x.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = x.numer().mod_floor(&pb).to_u64()?;
    Some((n as u128 * pow_mod(d, p - 2, p) as u128 % p as u128) as u64)
}

/// Exact rank of a rational matrix (Gaussian elimination over `Q`).
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for c in col..n_cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        let pivot_row = m[rank].clone();
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n_cols {
                m[r][c] = &m[r][c] - &f * &pivot_row[c];
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix: a rank modulo a large prime certifies full column rank,
/// otherwise the exact rank is computed.
pub fn rank_certified(rows: &[Vec<Q>]) -> usize {
    const P: u64 = 4_294_967_291;
    let n_cols = rows.first().map_or(0, |r| r.len());
    let reduced: Option<Vec<Vec<u64>>> =
        rows.iter().map(|r| r.iter().map(|x| q_mod_p(x, P)).collect()).collect();
    if let Some(mut m) = reduced {
        if rank_mod_p_reduced(&mut m, P) == n_cols {
            return n_cols;
        }
    }
    rank_q(rows)
}

// ---------------------------------------------------------------------------
// Commutant of Delta_sh(e_1)

/// Kernel of `u -> Delta_sh(e_1) u - u Delta_sh(e_1)` on `Q<e_0,e_1> (x) Q<e_0,e_1>` up to
/// total weight `max_weight`, compared with the span of `e_1^a (x) e_1^b`.
pub fn check_commutant(max_weight: usize) -> RelationReport {
    const P: u64 = 1_000_000_007;
    let mut t = Tally::new();
    let mut dims = Vec::new();
    for k in 0..=max_weight {
        let cols = tensor_basis(k);
        let rows = tensor_basis(k + 1);
        let index: HashMap<&(Word, Word), usize> = rows.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, (u, v)) in cols.iter().enumerate() {
            for (key, c) in commutator_terms(u, v) {
                m[index[&key]][j] += c;
            }
        }
        let rank = rank_mod_p(&m, P);
        let kernel = cols.len() - rank;
        let expected = k + 1;
        // the expected elements lie in the kernel
        for a in 0..=k {
            let (u, v) = (Word(vec![1; a]), Word(vec![1; k - a]));
            let ok = commutator_terms(&u, &v).values().all(|&c| c == 0);
            t.flag(ok, || json!({"weight": k, "element": [text(&u), text(&v)], "reason": "not in kernel"}));
        }
        // rank over Q is at least the rank mod P, so this bounds the kernel from above
        t.flag(kernel == expected, || json!({"weight": k, "kernel_dim_upper": kernel, "expected": expected}));
        dims.push(kernel);
    }
    let mut r = t.report("commutant", json!({"max_weight": max_weight}));
    r.instance["kernel_dims"] = json!(dims);
    r
}

fn tensor_basis(k: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for a in 0..=k {
        for u in Word::enumerate(1, a, None).into_iter().filter(|w| w.weight() == a) {
            for v in Word::enumerate(1, k - a, None).into_iter().filter(|w| w.weight() == k - a) {
                out.push((u.clone(), v));
            }
        }
    }
    out
}

fn commutator_terms(u: &Word, v: &Word) -> HashMap<(Word, Word), i64> {
    let e1 = Word(vec![1]);
    let mut out: HashMap<(Word, Word), i64> = HashMap::new();
    *out.entry((e1.concat(u), v.clone())).or_default() += 1;
    *out.entry((u.clone(), e1.concat(v))).or_default() += 1;
    *out.entry((u.concat(&e1), v.clone())).or_default() -= 1;
    *out.entry((u.clone(), v.concat(&e1))).or_default() -= 1;
    out.retain(|_, c| *c != 0);
    out
}

// ---------------------------------------------------------------------------
// Reversibility of the shuffle relation

/// `f^{-1} e_1 f`, with the depth truncation of `f` raised by one so that it is exact.
pub fn adjoint_e1<S: Scalar>(f: &NCSeries<S>) -> Result<NCSeries<S>> {
    let mut g = NCSeries::zero(f.ctx().clone(), f.n_roots(), f.max_weight(), f.max_depth().map(|d| d + 1));
    for (w, x) in f.terms() {
        g.set(w.clone(), x.clone());
    }
    NCSeries::adjoint(&g, &g.word(Word(vec![1])))
}

/// The three assertions a), b), c') for a series `f` with `f[e_1^s] = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct Prop73Report {
    pub group_like: RelationReport,
    pub adjoint_primitive: RelationReport,
    pub harmonic_shuffle: RelationReport,
    pub agree: bool,
}

/// Words over `{e_0, e_1}` of weight at most `w` not ending in `e_0` (including the empty word).
fn words_not_ending_e0(w: usize) -> Vec<Word> {
    Word::enumerate(1, w, None).into_iter().filter(|x| x.0.last() != Some(&0)).collect()
}

/// c'): `a[w ш e_0] = 0` for nonempty `w`, and for all `s >= 1`, `l >= 0` and `w, w'` not ending
/// in `e_0`, the Lambda^l coefficient of
/// `a[sum_{s'<s} (e_0^{s'} e_1 w) ш (-1)^{s-s'} e_0^{s-1-s'} (1 - Lambda e_0)^{-(s-s')} e_1 w']` vanishes.
pub fn check_harmonic_shuffle_system<S: Scalar>(a: &NCSeries<S>) -> RelationReport {
    let ctx = a.ctx().clone();
    let big_w = a.max_weight();
    let mut t = Tally::new();
    let e0 = Word(vec![0]);
    for w in Word::enumerate(1, big_w.saturating_sub(1), None) {
        if w.is_empty() {
            continue;
        }
        let x = a.eval_shuffle(&w, &e0);
        t.compare(&x, &S::zero(&ctx), || json!({"clause": "e0", "w": text(&w)}));
    }
    let tails = words_not_ending_e0(big_w);
    for s in 1..big_w {
        for l in 0..big_w {
            for w in &tails {
                for w2 in &tails {
                    if s + l + 1 + w.weight() + w2.weight() > big_w {
                        continue;
                    }
                    let mut acc = S::zero(&ctx);
                    for s1 in 0..s {
                        let m = s - s1;
                        let c = binomial((m + l - 1) as i64, l as u32) * if m % 2 == 0 { 1 } else { -1 };
                        let mut left = vec![0u8; s1];
                        left.push(1);
                        left.extend_from_slice(&w.0);
                        let mut right = vec![0u8; s - 1 - s1 + l];
                        right.push(1);
                        right.extend_from_slice(&w2.0);
                        let x = a.eval_shuffle(&Word(left), &Word(right));
                        acc = acc.add(&x.scale(&Q::from_integer(c)));
                    }
                    t.compare(&acc, &S::zero(&ctx), || {
                        json!({"clause": "harmonic", "s": s, "l": l, "w": text(w), "w2": text(w2)})
                    });
                }
            }
        }
    }
    t.report("harmonic-shuffle-system", json!({"max_weight": big_w}))
}

pub fn check_prop73<S: Scalar>(f: &NCSeries<S>) -> Result<Prop73Report> {
    let mut t = Tally::new();
    for k in 1..=f.max_weight() {
        let x = f.get(&Word(vec![1; k]));
        t.compare(&x, &S::zero(f.ctx()), || json!({"precondition": format!("f[e_1^{k}] = 0")}));
    }
    if !t.verdict.holds() {
        return Err(Error::InvalidArgument(format!("f[e_1^s] != 0: {:?}", t.witness)));
    }
    let group_like = check_shuffle(f);
    let a = adjoint_e1(f)?;
    let (verdict, w) = a.shuffle_equation_check(true);
    let adjoint_primitive = RelationReport {
        relation: "adjoint-primitive".into(),
        instance: json!({"max_weight": f.max_weight()}),
        verdict,
        witness: w.map(|(u, v, l, r)| json!({"at": [text(&u), text(&v)], "lhs": l.to_string(), "rhs": r.to_string()})),
        checked: a.shuffle_pairs().len(),
    };
    let harmonic_shuffle = check_harmonic_shuffle_system(&a);
    let agree = group_like.holds() == adjoint_primitive.holds() && group_like.holds() == harmonic_shuffle.holds();
    Ok(Prop73Report { group_like, adjoint_primitive, harmonic_shuffle, agree })
}

// ---------------------------------------------------------------------------
// Depth (1,1)

#[derive(Debug, Clone, Serialize)]
pub struct Depth11Report {
    pub series_side: RelationReport,
    pub adjoint_side: RelationReport,
    pub agree: bool,
}

/// Quasi-shuffle of `f` in depth `(1,1)` with the regularization
/// `f_*[e_1 e_1] = f[e_1 e_1] - f[e_0 e_1] / 2`:
/// `f[y_s] f[y_t] = f_*[y_s y_t] + f_*[y_t y_s] + f[y_{s+t}]` for `s + t <= max_weight`,
/// against the adjoint quasi-shuffle in depth `(1,1)` of `f^{-1} e_1 f` on words of weight
/// at most `max_weight`.
pub fn check_depth11_equivalence<S: Scalar>(f: &NCSeries<S>, max_weight: usize) -> Result<Depth11Report> {
    let mut t = Tally::new();
    let fstar = |w: Word| -> S {
        let x = f.get(&w);
        if w.0 == [1, 1] {
            x.sub(&f.get(&Word(vec![0, 1])).scale(&Q::new(1.into(), 2.into())))
        } else {
            x
        }
    };
    for s in 1..max_weight {
        for u in s..=max_weight - s {
            let lhs = f.get(&Word(y(s))).mul(&f.get(&Word(y(u))));
            let rhs = fstar(cat(&[&y(s), &y(u)]))
                .add(&fstar(cat(&[&y(u), &y(s)])))
                .add(&f.get(&Word(y(s + u))));
            t.compare(&lhs, &rhs, || json!({"s": s, "t": u}));
        }
    }
    let series_side = t.report("quasi-shuffle-depth-11", json!({"max_weight": max_weight}));
    let a = adjoint_e1(f)?;
    let adj = AdjointCoeffs::new(a);
    // a[e_0^b e_1 y y] has weight b + 1 + s1 + s2
    let adjoint_side = check_adjoint_quasi_shuffle(&adj, max_weight.saturating_sub(1));
    let agree = series_side.holds() == adjoint_side.holds();
    Ok(Depth11Report { series_side, adjoint_side, agree })
}

// ---------------------------------------------------------------------------
// Theorem-style triple

/// The three quasi-shuffle verdicts around `h -> a o h`: for `h`, for the acted family, and
/// the adjoint relation for `a`. Harmonic checks run over depth-one pairs of weight at most
/// `max_weight` and every `n` in `ns`.
pub fn quasi_shuffle_triple<S: Scalar>(
    a: &AdjointCoeffs<S>,
    h: &HarmonicSeq<S>,
    ns: &[u64],
    max_weight: u32,
) -> Result<[RelationReport; 3]> {
    let ctx = a.series.ctx().clone();
    let pairs = stuffle_pairs(1, max_weight, 2);
    let per_n: Vec<(RelationReport, RelationReport)> = ns
        .par_iter()
        .map(|&n| -> Result<_> {
            let plain = check_quasi_shuffle_fn(&pairs, 1, &ctx, |w| h.get(n, &w.to_loc()))?;
            let acted = check_quasi_shuffle_fn(&pairs, 1, &ctx, |w| crate::ihara::act_drrt_d12(a, h, n, w))?;
            Ok((plain, acted))
        })
        .collect::<Result<_>>()?;
    let merge = |name: &str, reps: Vec<RelationReport>| {
        let mut t = Tally::new();
        for (n, r) in ns.iter().zip(reps) {
            t.checked += r.checked;
            t.verdict = t.verdict.and(r.verdict);
            if t.witness.is_none() {
                t.witness = r.witness.map(|w| json!({"n": n, "witness": w}));
            }
        }
        t.report(name, json!({"ns": ns, "max_weight": max_weight}))
    };
    let (plain, acted): (Vec<_>, Vec<_>) = per_n.into_iter().unzip();
    Ok([
        merge("quasi-shuffle-h", plain),
        merge("quasi-shuffle-acted", acted),
        check_adjoint_quasi_shuffle(a, max_weight as usize),
    ])
}

// ---------------------------------------------------------------------------
// Linear independence

/// Full column rank of `M[n][(w, k)] = n^k frak_h_n(w)`, `n = 2..=n_max`, `k <= degree`.
/// The empty word stands for the constant sequence `1`.
pub fn rank_independence(words: &[HarmonicWord], n_max: i64, degree: u32) -> Result<RelationReport> {
    let cols = words.len() * (degree as usize + 1);
    let rows = (n_max - 1).max(0) as usize;
    if rows < cols {
        return Err(Error::Bound(format!("{rows} rows for {cols} unknowns; increase n_max")));
    }
    let tables: Vec<Vec<Q>> = words
        .par_iter()
        .map(|w| {
            if w.depth() == 0 {
                vec![Q::one(); n_max as usize]
            } else {
                frak_h_table(n_max, w, 1).into_iter().map(|x| x.as_rational().expect("N = 1").clone()).collect()
            }
        })
        .collect();
    let m: Vec<Vec<Q>> = (2..=n_max)
        .map(|n| {
            let mut row = Vec::with_capacity(cols);
            for t in &tables {
                let mut p = Q::one();
                for _ in 0..=degree {
                    row.push(&p * &t[(n - 1) as usize]);
                    p *= Q::from_integer(n.into());
                }
            }
            row
        })
        .collect();
    let rank = rank_certified(&m);
    let mut t = Tally::new();
    t.flag(rank == cols, || json!({"rank": rank, "columns": cols}));
    let mut r = t.report(
        "rank-independence",
        json!({"words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(), "n_max": n_max, "degree": degree}),
    );
    r.instance["rank"] = json!(rank);
    r.instance["columns"] = json!(cols);
    Ok(r)
}

// ---------------------------------------------------------------------------
// Li products, B coefficients and reversal reduction

/// `(Li[w_1] Li[w_2])[z^n] = frak_h_n(w_1 ⋄ w_2)` for `N = 1` words with combined
/// weight at most `max_weight` and every `n <= n_max`.
pub fn check_li_bridge(max_weight: u32, n_max: usize) -> Result<RelationReport> {
    let words: Vec<HarmonicWord> = crate::mhs::harmonic_words(1, max_weight.saturating_sub(1), max_weight as usize)
        .into_iter()
        .filter(|w| w.depth() > 0)
        .collect();
    let series: HashMap<&HarmonicWord, Vec<crate::scalars::CycRat>> =
        words.iter().map(|w| (w, crate::mhs::li_coeffs(&w.to_word(), n_max, 1))).collect();
    let mut t = Tally::new();
    for a in &words {
        for b in &words {
            if a.weight() + b.weight() > max_weight {
                continue;
            }
            let prod = crate::mhs::li_product_word(a, b)?.to_loc();
            let (la, lb) = (&series[a], &series[b]);
            for n in 1..=n_max {
                let mut lhs = crate::scalars::CycRat::zero(1);
                for m in 0..=n {
                    lhs = lhs.add(&la[m].mul(&lb[n - m]));
                }
                let rhs = crate::mhs::frak_h(n as i64, &prod, 1)?;
                t.compare(&lhs, &rhs, || json!({"w1": a.to_string(), "w2": b.to_string(), "n": n}));
            }
        }
    }
    Ok(t.report("li-bridge", json!({"max_weight": max_weight, "n_max": n_max})))
}

/// Polynomial quasi-shuffle `B^{l_1} B^{l_2} = B^{l_1+l_2} + B^{l_1,l_2} + B^{l_2,l_1}`
/// coefficientwise in every degree `b`, for `0 <= l_1, l_2 <= l_max`; together with
/// agreement of each table polynomial with the direct sum for `n <= n_max`.
pub fn check_b_quasi_shuffle(l_max: i64, n_max: i64) -> Result<RelationReport> {
    let table = crate::mhs::BTable::new(2 * l_max);
    let mut t = Tally::new();
    for l1 in 0..=l_max {
        for l2 in 0..=l_max {
            let (p1, p2) = (table.poly(&[l1])?, table.poly(&[l2])?);
            let s = table.poly(&[l1 + l2])?;
            let x = table.poly(&[l1, l2])?;
            let y = table.poly(&[l2, l1])?;
            for b in 0..=(l1 + l2 + 2) as usize {
                let mut lhs = Q::zero();
                for b1 in 0..=b {
                    lhs += p1.coeff(b1) * p2.coeff(b - b1);
                }
                let rhs = s.coeff(b) + x.coeff(b) + y.coeff(b);
                t.compare(&crate::scalars::CycRat::from_q(1, lhs), &crate::scalars::CycRat::from_q(1, rhs), || {
                    json!({"l1": l1, "l2": l2, "b": b})
                });
            }
        }
    }
    // the table against direct sums, tuples innermost-first
    let mut tuples: Vec<Vec<i64>> = (0..=l_max).map(|l1| vec![l1]).collect();
    tuples.extend((0..=l_max).flat_map(|l1| (0..=l_max).map(move |l2| vec![l1, l2])));
    for l in tuples {
        let poly = table.poly(&l)?;
        let w = crate::words::HarmonicWordLoc {
            entries: l.iter().rev().map(|&x| (-x, 0)).collect(),
            j: vec![1; l.len() + 1],
        };
        for n in 1..=n_max {
            let direct = crate::mhs::frak_h_q(n, &w)?;
            let value = poly.eval(&Q::from_integer(n.into()));
            let ok = value == direct;
            t.flag(ok, || json!({"l": l, "n": n, "table": value.to_string(), "direct": direct.to_string()}));
        }
    }
    Ok(t.report("b-quasi-shuffle", json!({"l_max": l_max, "n_max": n_max})))
}

/// Words with reversals (`N = 1`, entries `(u, u')` with `u + u' >= 1`) of weight in `1..=max_weight`.
pub fn wr_words(max_weight: u32) -> Vec<crate::words::HarmonicWordWR> {
    fn rec(left: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        for total in 1..=left {
            for u in 0..=total {
                acc.push((u, total - u));
                rec(left - total, acc, out);
                acc.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(max_weight, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|e| {
            let d = e.len();
            crate::words::HarmonicWordWR { entries: e, j: vec![1; d + 1] }
        })
        .collect()
}

/// Reversal reduction at `q = p^alpha`: the binomial series over plain words equals
/// `har_q(w)` modulo `p^prec` for every word with reversals of weight `<= max_weight`.
///
/// The series is cut at total order `prec - weight - 1`; the tail is certified by
/// `v_p(har_q(v)) >= weight(v)`, which is checked on every plain word used.
pub fn check_reversal_reduction(p: u64, alpha: u32, max_weight: u32, prec: i64) -> Result<RelationReport> {
    let q = p.pow(alpha) as i64;
    let words = wr_words(max_weight);
    let results: Vec<(String, Result<(crate::scalars::PAdicNum, crate::scalars::PAdicNum)>)> = words
        .par_iter()
        .map(|w| {
            let run = || -> Result<_> {
                let exact = crate::mhs::har(q, &w.to_loc(), 1)?;
                let lhs = crate::mhs::embed_any(&exact, p, prec, 1)?;
                let extra = (prec - w.weight() as i64 - 1).max(0) as u32;
                let mut rhs = crate::scalars::PAdicNum::exact_zero(p);
                for (c, v) in crate::mhs::reversal_reduction_terms(w, extra) {
                    let x = crate::mhs::har(q, &v.to_loc(), 1)?;
                    let x = crate::mhs::embed_any(&x, p, prec + 10, 1)?;
                    if let Some(val) = x.valuation() {
                        if val < v.weight() as i64 && x.rel_prec() > 0 {
                            return Err(Error::Precision(format!(
                                "har_{q}({v}) has valuation {val} below its weight; tail not certified"
                            )));
                        }
                    }
                    rhs = rhs.add(&x.scale(&c));
                }
                Ok((lhs, rhs.cap_precision(prec)))
            };
            (w.to_string(), run())
        })
        .collect();
    let mut t = Tally::new();
    for (w, r) in results {
        let (lhs, rhs) = r?;
        t.compare(&lhs, &rhs, || json!({"word": w}));
    }
    Ok(t.report("reversal-reduction", json!({"p": p, "alpha": alpha, "max_weight": max_weight, "prec": prec})))
}

// ---------------------------------------------------------------------------
// Harmonic actions against exact sums

/// `act_rt(har_q, har)_n(w) = har_{qn}(w)` modulo `p^prec` for plain words of depth `<= 2`
/// and weight `<= max_weight`, words with reversals of depth `<= 2` and weight
/// `<= max_weight_wr`, and `1 <= n <= n_max`.
pub fn check_act_rt(cfg: &crate::ihara::RtConfig, max_weight: u32, max_weight_wr: u32, n_max: u64) -> Result<RelationReport> {
    let g = crate::ihara::HarPrimePower::new(cfg.p, cfg.alpha, cfg.prec + 34);
    let h = crate::ihara::har_family(cfg, 30);
    let mut targets: Vec<crate::words::HarmonicWordWR> = crate::mhs::harmonic_words(1, max_weight, 2)
        .into_iter()
        .filter(|w| w.depth() > 0)
        .map(|w| w.to_wr())
        .collect();
    targets.extend(
        wr_words(max_weight_wr).into_iter().filter(|w| w.depth() <= 2 && w.entries.iter().any(|&(_, r)| r > 0)),
    );
    let jobs: Vec<(&crate::words::HarmonicWordWR, u64)> =
        targets.iter().flat_map(|w| (1..=n_max).map(move |n| (w, n))).collect();
    let q = cfg.q();
    let results: Vec<Result<(crate::scalars::PAdicNum, crate::scalars::PAdicNum)>> = jobs
        .par_iter()
        .map(|&(w, n)| {
            let lhs = crate::ihara::act_rt_wr_d12(&g, &h, n, w, cfg)?;
            let rhs = crate::ihara::har_exact_padic(q, n, &w.to_loc(), cfg.p, cfg.prec + 30)?;
            Ok((lhs, rhs))
        })
        .collect();
    let mut t = Tally::new();
    for ((w, n), r) in jobs.iter().zip(results) {
        let (lhs, rhs) = r?;
        t.compare(&lhs.cap_precision(cfg.prec), &rhs.cap_precision(cfg.prec), || json!({"word": w.to_string(), "n": n}));
    }
    Ok(t.report(
        "act-rt",
        json!({"p": cfg.p, "alpha": cfg.alpha, "prec": cfg.prec, "max_weight": max_weight,
               "max_weight_wr": max_weight_wr, "n_max": n_max}),
    ))
}

/// `Sigma^DR_inv(Sigma^RT(g)) = g` on depth `<= 2` words of weight `<= max_weight`, and
/// `act_drrt(Sigma^RT(g), har)_n = act_rt(g, har)_n` for `n` in `ns`, with `g = har_q`.
/// `Sigma^RT` is computed through weight `sigma_weight`.
pub fn check_sigma_coherence(
    cfg: &crate::ihara::RtConfig,
    max_weight: u32,
    sigma_weight: u32,
    ns: &[u64],
) -> Result<RelationReport> {
    use crate::ihara::GSource;
    let g = crate::ihara::HarPrimePower::new(cfg.p, cfg.alpha, cfg.prec + 34);
    let h = crate::ihara::har_family(cfg, 30);
    let a = crate::ihara::sigma_rt(&g, sigma_weight, cfg)?;
    let back = crate::ihara::sigma_dr_inv(&a, 2);
    let words: Vec<HarmonicWord> =
        crate::mhs::harmonic_words(1, max_weight, 2).into_iter().filter(|w| w.depth() > 0).collect();
    let mut t = Tally::new();
    for w in &words {
        let x = back
            .get(&w.to_loc())
            .cloned()
            .ok_or_else(|| Error::Bound(format!("Sigma^RT has no coefficients for {w}; raise its weight")))?;
        let e = g.value(w)?;
        t.compare(&x.cap_precision(cfg.prec), &e.cap_precision(cfg.prec), || json!({"part": "inverse", "word": w.to_string()}));
    }
    let jobs: Vec<(&HarmonicWord, u64)> = words.iter().flat_map(|w| ns.iter().map(move |&n| (w, n))).collect();
    let results: Vec<Result<_>> = jobs
        .par_iter()
        .map(|&(w, n)| {
            let x = crate::ihara::act_drrt_d12(&a, &h, n, w)?;
            let y = crate::ihara::act_rt_d12(&g, &h, n, w, cfg)?;
            Ok((x, y))
        })
        .collect();
    for ((w, n), r) in jobs.iter().zip(results) {
        let (x, y) = r?;
        t.compare(&x.cap_precision(cfg.prec), &y.cap_precision(cfg.prec), || {
            json!({"part": "factorization", "word": w.to_string(), "n": n})
        });
    }
    Ok(t.report(
        "sigma-coherence",
        json!({"p": cfg.p, "alpha": cfg.alpha, "prec": cfg.prec, "max_weight": max_weight,
               "sigma_weight": sigma_weight, "ns": ns}),
    ))
}

// ---------------------------------------------------------------------------
// Random group-like series

fn exp_nilpotent(l: &NCSeries<crate::scalars::CycRat>) -> Result<NCSeries<crate::scalars::CycRat>> {
    let mut out = NCSeries::one(1, 1, l.max_weight(), l.max_depth());
    let mut pw = out.clone();
    for k in 1..=l.max_weight() {
        let c = crate::scalars::CycRat::from_q(1, Q::new(BigInt::one(), BigInt::from(k)));
        pw = pw.concat_mul(l)?.scale(&c);
        out = out.add(&pw)?;
    }
    Ok(out)
}

/// Seeded `exp(L)` with `L` a random Lie series in `e_0` and right-normed brackets of
/// weight `2..=max_weight` (so `f[e_1^k] = 0`). With `perturbed`, a random non-Lie
/// weight-3 word is added afterwards, breaking group-likeness.
pub fn random_group_like(seed: u64, max_weight: usize, perturbed: bool) -> Result<NCSeries<crate::scalars::CycRat>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut rand_chacha::ChaCha8Rng| {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        crate::scalars::CycRat::from_q(1, Q::new(num.into(), den.into()))
    };
    let base = NCSeries::zero(1, 1, max_weight, None);
    let letter = |a: u8| base.word(Word(vec![a]));
    let mut lie = letter(0).scale(&coef(&mut rng));
    for k in 2..=max_weight {
        for _ in 0..2 {
            // [a_1, [a_2, ..., [a_{k-1}, a_k]]] with a_{k-1} != a_k
            let last: u8 = rng.gen_range(0..2);
            let mut b = letter(last);
            b = br_series(&letter(1 - last), &b)?;
            for _ in 2..k {
                b = br_series(&letter(rng.gen_range(0..2)), &b)?;
            }
            lie = lie.add(&b.scale(&coef(&mut rng)))?;
        }
    }
    let mut f = exp_nilpotent(&lie)?;
    if perturbed && max_weight >= 3 {
        let words = [[0u8, 0, 1], [0, 1, 1], [1, 0, 1], [0, 1, 0]];
        let w = words[rng.gen_range(0..words.len())];
        let mut c = coef(&mut rng);
        if c.is_exact_zero() {
            c = crate::scalars::CycRat::one(1);
        }
        f.add_to(Word(w.to_vec()), &c);
    }
    Ok(f)
}

/// `a = e_1 + y - y(e_0, e_inf)` for a seeded random `y`; `e_0 + a + a(e_0, e_inf) = 0` exactly.
pub fn random_special_automorphism(seed: u64, max_weight: usize) -> Result<NCSeries<crate::scalars::CycRat>> {
    let y = random_group_like(seed, max_weight, true)?;
    let e0 = y.word(Word(vec![0]));
    let e1 = y.word(Word(vec![1]));
    let sigma = [e0.clone(), e0.add(&e1)?.neg()];
    e1.add(&y)?.sub(&y.substitute(&sigma)?)
}

fn br_series<S: Scalar>(x: &NCSeries<S>, y: &NCSeries<S>) -> Result<NCSeries<S>> {
    x.concat_mul(y)?.sub(&y.concat_mul(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ihara::{har_family, recover_phi, sigma_rt, HarPrimePower, RtConfig};
    use crate::mhs::harmonic_words;
    use crate::scalars::{CycRat, PAdicNum};

    type F = NCSeries<CycRat>;

    fn rat(a: i64, b: i64) -> CycRat {
        CycRat::from_q(1, Q::new(a.into(), b.into()))
    }

    fn br(x: &F, y: &F) -> F {
        x.concat_mul(y).unwrap().sub(&y.concat_mul(x).unwrap()).unwrap()
    }

    fn exp_series(l: &F) -> F {
        let mut out = F::one(1, 1, l.max_weight(), l.max_depth());
        let mut pw = out.clone();
        for k in 1..=l.max_weight() {
            pw = pw.concat_mul(l).unwrap().scale(&rat(1, k as i64));
            out = out.add(&pw).unwrap();
        }
        out
    }

    fn group_like(w: usize, c: [i64; 4]) -> F {
        let base = F::zero(1, 1, w, None);
        let e0 = base.word(Word(vec![0]));
        let e1 = base.word(Word(vec![1]));
        let l1 = br(&e0, &e1);
        let lie = e0
            .scale(&rat(c[0], 1))
            .add(&l1.scale(&rat(c[1], 2)))
            .unwrap()
            .add(&br(&e0, &l1).scale(&rat(c[2], 3)))
            .unwrap()
            .add(&br(&e1, &l1).scale(&rat(c[3], 5)))
            .unwrap();
        exp_series(&lie)
    }

    #[test]
    fn shuffle_detects_perturbation() {
        let f = group_like(5, [1, 2, -1, 3]);
        assert!(check_shuffle(&f).holds());
        let mut g = f.clone();
        g.add_to(Word(vec![0, 1, 1]), &rat(1, 1));
        let r = check_shuffle(&g);
        assert!(!r.holds());
        assert!(r.witness.is_some());
    }

    #[test]
    fn quasi_shuffle_of_harmonic_sums() {
        let pairs = stuffle_pairs(1, 4, 3);
        assert!(pairs.iter().all(|(a, b)| a.weight() + b.weight() <= 4));
        let r = check_quasi_shuffle_fn(&pairs, 1, &1, |w| crate::mhs::har(9, &w.to_loc(), 1)).unwrap();
        assert!(r.holds(), "{}", r.to_json_line());
        let bad = check_quasi_shuffle_fn(&pairs, 1, &1, |w| {
            let x = crate::mhs::har(9, &w.to_loc(), 1)?;
            Ok(if w.weight() == 2 { x.add(&CycRat::one(1)) } else { x })
        })
        .unwrap();
        assert!(!bad.holds());
    }

    #[test]
    fn stored_table_quasi_shuffle() {
        let mut h = HarmonicCoeffs::new(2);
        for w in harmonic_words(2, 4, 2) {
            h.insert(w.to_loc(), crate::mhs::har(7, &w.to_loc(), 2).unwrap());
        }
        let ctx = 2u32;
        let r = check_quasi_shuffle(&h, &ctx).unwrap();
        assert!(r.holds() && r.checked > 0);
    }

    #[test]
    fn adjoint_quasi_shuffle_of_sigma_rt() {
        let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 5, &cfg).unwrap();
        let r = check_adjoint_quasi_shuffle(&a, 4);
        assert!(r.verdict.holds_to(5), "{}", r.to_json_line());
    }

    #[test]
    fn duality_for_special_automorphisms() {
        let w = 6;
        let base = F::zero(1, 1, w, None);
        let e0 = base.word(Word(vec![0]));
        let e1 = base.word(Word(vec![1]));
        let l1 = br(&e0, &e1);
        let y = l1
            .scale(&rat(1, 2))
            .add(&e0.concat_mul(&l1).unwrap().scale(&rat(-3, 1)))
            .unwrap()
            .add(&br(&e1, &l1).concat_mul(&e1).unwrap().scale(&rat(2, 7)))
            .unwrap();
        let sigma = [e0.clone(), e0.add(&e1).unwrap().neg()];
        let a = e1.add(&y).unwrap().sub(&y.substitute(&sigma).unwrap()).unwrap();
        let defect = special_automorphism_defect(&a).unwrap();
        assert!(defect.terms().values().all(|x| x.is_exact_zero()));
        let words = Word::enumerate(1, 3, None);
        let r = check_prime_harmonic_duality(&a, &words, w).unwrap();
        assert!(r.holds(), "{}", r.to_json_line());
        let mut bad = a.clone();
        bad.add_to(Word(vec![0, 1, 1]), &rat(1, 1));
        assert!(!check_prime_harmonic_duality(&bad, &words, w).unwrap().holds());
    }

    #[test]
    fn ranks() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(&m, 101), 2);
        let q: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        assert_eq!(rank_q(&q), 2);
        assert_eq!(rank_certified(&q), 2);
        let id: Vec<Vec<Q>> = (0..3).map(|i| (0..3).map(|j| Q::from_integer(((i == j) as i64).into())).collect()).collect();
        assert_eq!(rank_certified(&id), 3);
    }

    #[test]
    fn commutant_is_spanned_by_powers_of_e1() {
        let r = check_commutant(3);
        assert!(r.holds(), "{}", r.to_json_line());
        assert_eq!(r.instance["kernel_dims"], json!([1, 2, 3, 4]));
    }

    #[test]
    fn prop73_agreement() {
        let f = group_like(5, [0, 2, -1, 3]);
        let r = check_prop73(&f).unwrap();
        assert!(r.group_like.holds() && r.adjoint_primitive.holds() && r.harmonic_shuffle.holds());
        let mut g = f.clone();
        g.add_to(Word(vec![0, 0, 1]), &rat(1, 1));
        g.add_to(Word(vec![0, 1, 1]), &rat(-2, 1));
        let r = check_prop73(&g).unwrap();
        assert!(!r.group_like.holds());
        assert!(r.agree, "{}", serde_json::to_string(&r).unwrap());
        let mut h = f.clone();
        h.add_to(Word(vec![1, 1]), &rat(1, 1));
        assert!(check_prop73(&h).is_err());
    }

    #[test]
    fn depth11_on_group_likes() {
        let f = group_like(5, [0, 2, -1, 3]);
        let r = check_depth11_equivalence(&f, 5).unwrap();
        assert!(r.agree && !r.series_side.holds(), "{}", serde_json::to_string(&r).unwrap());
        let e = group_like(5, [3, 0, 0, 0]);
        let r = check_depth11_equivalence(&e, 5).unwrap();
        assert!(r.series_side.holds() && r.adjoint_side.holds());
    }

    #[test]
    fn depth11_on_frobenius_phi() {
        let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 5, &cfg).unwrap();
        let mut full = a.series.clone();
        full.add_to(Word(vec![1]), &PAdicNum::from_int(5, &1.into(), 5));
        let phi = recover_phi(&full, 5, false).unwrap();
        let r = check_depth11_equivalence(&phi, 5).unwrap();
        assert!(r.series_side.verdict.holds_to(5), "{}", serde_json::to_string(&r).unwrap());
        assert!(r.adjoint_side.verdict.holds_to(5), "{}", serde_json::to_string(&r).unwrap());
    }

    #[test]
    fn triple_for_sigma_rt() {
        let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 4, &cfg).unwrap();
        let h = har_family(&cfg, 30);
        let [plain, acted, adj] = quasi_shuffle_triple(&a, &h, &[2, 3], 4).unwrap();
        assert!(plain.verdict.holds_to(5), "{}", plain.to_json_line());
        assert!(acted.verdict.holds_to(5), "{}", acted.to_json_line());
        assert!(adj.verdict.holds_to(5), "{}", adj.to_json_line());
    }

    #[test]
    fn independence_rank() {
        let words: Vec<HarmonicWord> = std::iter::once(HarmonicWord { s: vec![], j: vec![1] })
            .chain(harmonic_words(1, 3, 2))
            .collect();
        let r = rank_independence(&words, 40, 1).unwrap();
        assert!(r.holds(), "{}", r.to_json_line());
        assert!(rank_independence(&words, 5, 1).is_err());
        let dup = vec![words[1].clone(), words[1].clone()];
        assert!(!rank_independence(&dup, 20, 0).unwrap().holds());
    }

    #[test]
    fn li_bridge_small() {
        let r = check_li_bridge(3, 12).unwrap();
        assert_eq!(r.verdict, Verdict::Exact, "{:?}", r.witness);
    }

    #[test]
    fn b_quasi_shuffle_small() {
        let r = check_b_quasi_shuffle(3, 12).unwrap();
        assert_eq!(r.verdict, Verdict::Exact, "{:?}", r.witness);
    }

    #[test]
    fn wr_word_enumeration() {
        let w = wr_words(2);
        // weight 1: (1,0) (0,1); weight 2: three single entries and four pairs
        assert_eq!(w.len(), 2 + 3 + 4);
        assert!(w.iter().all(|x| x.weight() <= 2 && x.j.len() == x.depth() + 1));
    }

    #[test]
    fn reversal_reduction_small() {
        let r = check_reversal_reduction(5, 1, 3, 6).unwrap();
        assert!(r.verdict.holds_to(6), "{:?}", r.witness);
    }

    #[test]
    fn act_rt_small() {
        let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
        let r = check_act_rt(&cfg, 3, 2, 3).unwrap();
        assert!(r.verdict.holds_to(5), "{:?}", r.witness);
    }

    #[test]
    fn sigma_coherence_small() {
        let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
        let r = check_sigma_coherence(&cfg, 3, 4, &[2, 3]).unwrap();
        assert!(r.verdict.holds_to(5), "{:?}", r.witness);
    }

    #[test]
    fn random_group_likes() {
        let f = random_group_like(7, 4, false).unwrap();
        assert_eq!(f.to_json(), random_group_like(7, 4, false).unwrap().to_json());
        assert!(check_shuffle(&f).holds());
        assert!(f.get(&Word(vec![1, 1])).is_zero());
        let g = random_group_like(7, 4, true).unwrap();
        assert!(!check_shuffle(&g).holds());
        let a = random_special_automorphism(3, 5).unwrap();
        assert!(special_automorphism_defect(&a).unwrap().terms().values().all(|x| x.is_exact_zero()));
        assert!(check_prime_harmonic_duality(&a, &Word::enumerate(1, 2, None), 5).unwrap().holds());
    }
}
