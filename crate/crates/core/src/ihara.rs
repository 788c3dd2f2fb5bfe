//! Harmonic Ihara actions in harmonic depth at most two (`N = 1`), the
//! comparison maps between prime weighted harmonic sums and adjoint
//! coefficients, and recovery of a group-like series from its adjoint.
//!
//! Everything rests on one expansion. Writing `m_i = q u_i + r_i` with
//! `0 <= r_i < q` in `har_{qn}(w)` and expanding each factor binomially turns
//! the sum into
//!
//! `sum coef * n^e * prod_B har_q(V_B) * har_n(V')`
//!
//! where the `V_B` come from runs of equal `u_i` and `V'` from the positions
//! with `r_i = 0` that survive elimination of the `u`-polynomials. The
//! coefficients are exact rationals independent of `q` and `n`.

use crate::error::{Error, Result};
use crate::mhs::{eliminate, reversal_reduction_terms, ElimKey, HarmonicCoeffs, HarmonicSeq, Tag};
use crate::ncseries::NCSeries;
use crate::scalars::rational::{binomial, Q};
use crate::scalars::{PAdicCtx, PAdicNum, Scalar, Verdict, ZeroCheck};
use crate::words::{HarmonicWord, HarmonicWordLoc, HarmonicWordWR, Word};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Prime, exponent and requested absolute precision of a p-adic computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RtConfig {
    pub p: u64,
    pub alpha: u32,
    pub prec: i64,
}

impl RtConfig {
    pub fn q(&self) -> u64 {
        self.p.pow(self.alpha)
    }
}

/// One family of terms in the expansion of `har_{qn}(w)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RtKey {
    /// Arguments of the `har_q` factors (entries outer-first), sorted.
    pub gwords: Vec<Vec<(u32, u32)>>,
    /// Argument of the `har_n` factor; empty for the purely polynomial part.
    pub hword: Vec<(u32, u32)>,
    /// Target positions (outer-first) that survive into `hword`.
    pub survivors: Vec<usize>,
    /// Power of `n`.
    pub npow: i64,
}

/// Expansion of `har_{qn}(w)` truncated to total binomial order `cutoff`.
#[derive(Debug, Clone)]
pub struct RtExpansion {
    pub target: Vec<(u32, u32)>,
    pub cutoff: u32,
    pub terms: BTreeMap<RtKey, Q>,
}

impl RtExpansion {
    pub fn hwords(&self) -> BTreeSet<Vec<(u32, u32)>> {
        self.terms.keys().map(|k| k.hword.clone()).collect()
    }
}

/// Lower bound for the valuation of a term of total binomial order `ltot`
/// in an expansion of a depth-`d` target.
fn term_bound(ltot: f64, d: usize, p: u64) -> f64 {
    let d = d as f64;
    ltot - d * (1.0 + (ltot + d + 1.0).ln() / (p as f64).ln())
}

/// Smallest cutoff `L` such that every term of order `> L` has valuation `>= t`.
///
/// `term_bound` is increasing in `ltot` once `(ltot + d + 1) ln p > d`, which
/// holds from `ltot = 0` on for `d <= 2`.
pub fn rt_cutoff(t: i64, d: usize, p: u64) -> u32 {
    assert!(d <= 2);
    let mut l = 0u32;
    while term_bound(l as f64 + 1.0, d, p) < t as f64 {
        l += 1;
    }
    l
}

/// Slack covering the denominators of expansion coefficients up to order `l`.
fn coef_slack(l: u32, d: usize, p: u64) -> i64 {
    let d = d as f64;
    (d * (1.0 + (l as f64 + d + 1.0).ln() / (p as f64).ln())).ceil() as i64 + 1
}

type ElimCache = HashMap<(Vec<(i64, i64)>, Vec<Tag>), BTreeMap<ElimKey, Q>>;

fn eliminate_cached(cache: &mut ElimCache, entries: Vec<(i64, i64)>, tags: Vec<Tag>) -> &BTreeMap<ElimKey, Q> {
    cache.entry((entries, tags)).or_insert_with_key(|(e, t)| eliminate(e, t))
}

/// Binomial slots `(position, reversed?)` of the positions with `r != 0`.
fn slots(target: &[(u32, u32)], nz: &[usize]) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for &k in nz {
        if target[k].0 > 0 {
            out.push((k, false));
        }
        if target[k].1 > 0 {
            out.push((k, true));
        }
    }
    out
}

fn assignments(n_slots: usize, budget: u32) -> Vec<Vec<u32>> {
    fn rec(left: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in 0..=budget {
            cur.push(x);
            rec(left - 1, budget - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n_slots, budget, &mut Vec::new(), &mut out);
    out
}

fn build_expansion(target: &[(u32, u32)], cutoff: u32) -> RtExpansion {
    let d = target.len();
    let weight: i64 = target.iter().map(|&(a, b)| (a + b) as i64).sum();
    let mut terms: BTreeMap<RtKey, Q> = BTreeMap::new();
    let mut cache = ElimCache::new();
    if d == 0 {
        terms.insert(RtKey { gwords: vec![], hword: vec![], survivors: vec![], npow: 0 }, Q::one());
        return RtExpansion { target: target.to_vec(), cutoff, terms };
    }
    for cut_mask in 0u32..(1 << (d - 1)) {
        // blocks of equal u, outer-first
        let mut blocks: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..d {
            if cut_mask >> (k - 1) & 1 == 1 {
                blocks.push(vec![k]);
            } else {
                blocks.last_mut().unwrap().push(k);
            }
        }
        for r0_mask in 0u32..(1 << d) {
            let is_r0 = |k: usize| r0_mask >> k & 1 == 1;
            // only the innermost member of a block may have r = 0
            if blocks.iter().any(|b| b[..b.len() - 1].iter().any(|&k| is_r0(k))) {
                continue;
            }
            let nz: Vec<usize> = (0..d).filter(|&k| !is_r0(k)).collect();
            let sl = slots(target, &nz);
            for asg in assignments(sl.len(), cutoff) {
                let mut l = vec![0u32; d];
                let mut lr = vec![0u32; d];
                let mut coef = Q::one();
                for (&(k, rev), &x) in sl.iter().zip(&asg) {
                    let s = if rev { target[k].1 } else { target[k].0 };
                    coef *= Q::from_integer(binomial(-(s as i64), x));
                    if rev {
                        lr[k] = x;
                    } else {
                        l[k] = x;
                    }
                }
                let mut gwords: Vec<Vec<(u32, u32)>> = blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .filter(|&&k| !is_r0(k))
                            .map(|&k| (target[k].0 + l[k], target[k].1 + lr[k]))
                            .collect::<Vec<_>>()
                    })
                    .filter(|v| !v.is_empty())
                    .collect();
                gwords.sort();
                // per block: choices (coef, x, y) from expanding (n - 1 - u)^{sum l'}
                let block_choices: Vec<Vec<(Q, i64, i64)>> = blocks
                    .iter()
                    .map(|b| {
                        let lsum: i64 = b.iter().filter(|&&k| !is_r0(k)).map(|&k| l[k] as i64).sum();
                        let lpsum: i64 = b.iter().filter(|&&k| !is_r0(k)).map(|&k| lr[k] as i64).sum();
                        let (x0, y0) = match b.last() {
                            Some(&k) if is_r0(k) => (target[k].0 as i64, target[k].1 as i64),
                            _ => (0, 0),
                        };
                        (0..=lpsum)
                            .map(|i| {
                                let sign = if i % 2 == 0 { 1 } else { -1 };
                                (
                                    Q::from_integer(binomial(lpsum, i as u32) * sign),
                                    x0 - lsum,
                                    y0 - (lpsum - i),
                                )
                            })
                            .collect()
                    })
                    .collect();
                let tags: Vec<Tag> = blocks
                    .iter()
                    .map(|b| b.last().copied().filter(|&k| is_r0(k)))
                    .collect();
                let inner_free = tags.last().unwrap().is_none();
                // cartesian product over blocks
                let mut combos: Vec<(Q, Vec<(i64, i64)>)> = vec![(coef.clone(), vec![])];
                for ch in &block_choices {
                    let mut next = Vec::new();
                    for (c, e) in &combos {
                        for (c2, x, y) in ch {
                            let mut e2 = e.clone();
                            e2.push((*x, *y));
                            next.push((c * c2, e2));
                        }
                    }
                    combos = next;
                }
                for (c, entries) in combos {
                    let mut pieces: Vec<(Q, Vec<(i64, i64)>, Vec<Tag>, i64)> =
                        vec![(c.clone(), entries.clone(), tags.clone(), 0)];
                    if inner_free {
                        // the innermost block may sit at u = 0
                        let (x, y) = *entries.last().unwrap();
                        if x == 0 {
                            let mut e = entries.clone();
                            e.pop();
                            let mut t = tags.clone();
                            t.pop();
                            pieces.push((c.clone(), e, t, -y));
                        }
                    }
                    for (pc, e, t, npow0) in pieces {
                        let elim = eliminate_cached(&mut cache, e, t);
                        for (key, v) in elim {
                            let hword: Vec<(u32, u32)> =
                                key.entries.iter().map(|&(a, b)| (a as u32, b as u32)).collect();
                            let survivors: Vec<usize> =
                                key.tags.iter().map(|t| t.expect("untagged entries are eliminated")).collect();
                            let hw: i64 = key.entries.iter().map(|&(a, b)| a + b).sum();
                            let rk = RtKey {
                                gwords: gwords.clone(),
                                hword,
                                survivors,
                                npow: weight + key.npow + npow0 - hw,
                            };
                            *terms.entry(rk).or_insert_with(Q::zero) += &pc * v;
                        }
                    }
                }
            }
        }
    }
    terms.retain(|_, v| !v.is_zero());
    RtExpansion { target: target.to_vec(), cutoff, terms }
}

/// Cached expansion of `har_{qn}(target)` (entries outer-first, depth at most two).
pub fn rt_expansion(target: &[(u32, u32)], cutoff: u32) -> Result<Arc<RtExpansion>> {
    if target.len() > 2 {
        return Err(Error::Unsupported(format!("harmonic depth {} > 2", target.len())));
    }
    if target.iter().any(|&e| e == (0, 0)) {
        return Err(Error::InvalidWord("entry (0,0) in a word with reversals".into()));
    }
    type Cache = Mutex<HashMap<(Vec<(u32, u32)>, u32), Arc<RtExpansion>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (target.to_vec(), cutoff);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(build_expansion(target, cutoff));
    cache.lock().unwrap().insert(key, e.clone());
    Ok(e)
}

// ---------------------------------------------------------------------------
// Sources of har_q values

/// Values `g(w)` of a prime weighted harmonic system at a fixed index `q = p^alpha`.
pub trait GSource: Sync {
    fn value(&self, w: &HarmonicWord) -> Result<PAdicNum>;
}

impl GSource for HarmonicCoeffs<PAdicNum> {
    fn value(&self, w: &HarmonicWord) -> Result<PAdicNum> {
        self.get(&w.to_loc())
            .cloned()
            .ok_or_else(|| Error::Bound(format!("g has no value at {w}; extend its weight range")))
    }
}

/// Exact `har_q` embedded in `Q_p` at a fixed absolute precision.
pub struct HarPrimePower {
    pub p: u64,
    pub alpha: u32,
    pub prec: i64,
    memo: Mutex<HashMap<Vec<u32>, PAdicNum>>,
}

impl HarPrimePower {
    pub fn new(p: u64, alpha: u32, prec: i64) -> Self {
        HarPrimePower { p, alpha, prec, memo: Mutex::new(HashMap::new()) }
    }
}

impl GSource for HarPrimePower {
    fn value(&self, w: &HarmonicWord) -> Result<PAdicNum> {
        if let Some(x) = self.memo.lock().unwrap().get(&w.s) {
            return Ok(x.clone());
        }
        let q = self.p.pow(self.alpha) as i64;
        let x = crate::mhs::har(q, &w.to_loc(), 1)?;
        let v = PAdicNum::from_rational(self.p, x.as_rational().expect("N = 1"), self.prec);
        self.memo.lock().unwrap().insert(w.s.clone(), v.clone());
        Ok(v)
    }
}

fn plain_n1(s: Vec<u32>) -> HarmonicWord {
    let d = s.len();
    HarmonicWord { s, j: vec![1; d + 1] }
}

/// `g` on a word with reversals via the reversal reduction, to absolute precision `t`.
fn g_value(g: &dyn GSource, entries: &[(u32, u32)], t: i64) -> Result<PAdicNum> {
    let checked = |w: &HarmonicWord| -> Result<PAdicNum> {
        let x = g.value(w)?;
        if let Some(v) = x.valuation() {
            if v < w.weight() as i64 && x.rel_prec() > 0 {
                return Err(Error::InvalidArgument(format!(
                    "g({w}) has valuation {v} below its weight; tails cannot be certified"
                )));
            }
        }
        Ok(x)
    };
    if entries.iter().all(|&(a, b)| b == 0 && a > 0) {
        return checked(&plain_n1(entries.iter().map(|&(a, _)| a).collect()));
    }
    let w = HarmonicWordWR { entries: entries.to_vec(), j: vec![1; entries.len() + 1] };
    let wt = w.weight() as i64;
    let extra = (t - wt - 1).max(0) as u32;
    let mut acc: Option<PAdicNum> = None;
    for (c, v) in reversal_reduction_terms(&w, extra) {
        let term = checked(&v)?.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.expect("at least one term").with_abs_cap(t))
}

fn h_loc(entries: &[(u32, u32)]) -> HarmonicWordLoc {
    HarmonicWordLoc {
        entries: entries.iter().map(|&(a, b)| (a as i64, b as i64)).collect(),
        j: vec![1; entries.len() + 1],
    }
}

fn n_pow(n: u64, e: i64) -> Result<Q> {
    if e < 0 {
        return Err(Error::Inconsistent(format!("negative power n^{e} in the expansion")));
    }
    Ok(crate::mhs::q_pow(n as i64, e))
}

/// `(g o^RT h)_n(w)` for a target word with reversals of depth at most two.
///
/// The result is certified modulo `p^prec`; an error reports the achievable
/// precision when the inputs are too coarse.
pub fn act_rt_wr_d12(
    g: &dyn GSource,
    h: &HarmonicSeq<PAdicNum>,
    n: u64,
    target: &HarmonicWordWR,
    cfg: &RtConfig,
) -> Result<PAdicNum> {
    let d = target.depth();
    if d > 2 {
        return Err(Error::Unsupported(format!("harmonic depth {d} > 2")));
    }
    let p = cfg.p;
    let mut t = cfg.prec;
    let mut hmin = 0i64;
    let mut exp;
    let mut hvals: HashMap<Vec<(u32, u32)>, PAdicNum> = HashMap::new();
    loop {
        exp = rt_expansion(&target.entries, rt_cutoff(t, d, p))?;
        for v in exp.hwords() {
            if v.is_empty() || hvals.contains_key(&v) {
                continue;
            }
            let x = h.get(n, &h_loc(&v))?;
            if let Some(val) = x.valuation() {
                hmin = hmin.min(val);
            }
            hvals.insert(v, x);
        }
        let need = cfg.prec - hmin;
        if need <= t {
            break;
        }
        t = need;
    }
    let slack = coef_slack(exp.cutoff, d, p);
    let mut gcache: HashMap<Vec<(u32, u32)>, PAdicNum> = HashMap::new();
    let mut acc = PAdicNum::exact_zero(p);
    for (key, coef) in &exp.terms {
        let c = coef * n_pow(n, key.npow)?;
        let mut term = if key.hword.is_empty() {
            PAdicNum::from_int(p, &num_bigint::BigInt::one(), t + slack)
        } else {
            hvals[&key.hword].clone()
        };
        for gw in &key.gwords {
            let gv = match gcache.get(gw) {
                Some(x) => x.clone(),
                None => {
                    let x = g_value(g, gw, t + slack)?;
                    gcache.insert(gw.clone(), x.clone());
                    x
                }
            };
            term = term.mul(&gv);
        }
        acc = acc.add(&term.scale(&c));
    }
    let res = acc.cap_precision(t + hmin.min(0));
    let achieved = res.abs_prec().unwrap_or(i64::MAX);
    if achieved < cfg.prec {
        return Err(Error::Precision(format!(
            "requested mod {p}^{}, inputs support only mod {p}^{achieved}",
            cfg.prec
        )));
    }
    Ok(res)
}

/// `(g o^RT h)_n(w)` for a plain target of depth at most two.
pub fn act_rt_d12(
    g: &dyn GSource,
    h: &HarmonicSeq<PAdicNum>,
    n: u64,
    target: &HarmonicWord,
    cfg: &RtConfig,
) -> Result<PAdicNum> {
    act_rt_wr_d12(g, h, n, &target.to_wr(), cfg)
}

/// The depth-one action written with `B` coefficients:
/// `h_n(s) + sum_{b>=1} n^{b+s} sum_{l>=b-1} C(-s,l) B_b^l g(s+l)`.
pub fn act_rt_d1_b_form(
    g: &dyn GSource,
    h: &HarmonicSeq<PAdicNum>,
    n: u64,
    s: u32,
    cfg: &RtConfig,
) -> Result<PAdicNum> {
    let p = cfg.p;
    let hs = h.get(n, &h_loc(&[(s, 0)]))?;
    let hmin = hs.valuation().unwrap_or(0).min(0);
    let t = cfg.prec - hmin;
    let lmax = rt_cutoff(t, 1, p);
    let slack = coef_slack(lmax, 1, p);
    let mut acc = hs;
    for l in 0..=lmax {
        let gv = g.value(&plain_n1(vec![s + l]))?.cap_precision(t + slack);
        let bin = Q::from_integer(binomial(-(s as i64), l));
        for b in 1..=(l as usize + 1) {
            let bb = crate::mhs::b_coeff(b, &[l as i64])?;
            if bb.is_zero() {
                continue;
            }
            let c = &bin * bb * n_pow(n, (b as u32 + s) as i64)?;
            acc = acc.add(&gv.scale(&c));
        }
    }
    Ok(acc.cap_precision(t + hmin))
}

// ---------------------------------------------------------------------------
// Adjoint coefficient families

/// Coefficients of words `e_0^b e_1 w`, stored as a series, with a bound on
/// the valuation of every coefficient that is not stored.
#[derive(Debug, Clone)]
pub struct AdjointCoeffs<S: Scalar> {
    pub series: NCSeries<S>,
    pub tail_valuation: Option<i64>,
}

impl<S: Scalar> AdjointCoeffs<S> {
    pub fn new(series: NCSeries<S>) -> Self {
        AdjointCoeffs { series, tail_valuation: None }
    }

    /// `a[e_0^b e_1 w]`.
    pub fn get(&self, b: usize, w: &Word) -> S {
        self.series.get(&adjoint_word(b, w))
    }

    pub fn max_weight(&self) -> usize {
        self.series.max_weight()
    }

    /// JSON `{"terms":[{"b":..,"word":..,"value":..}]}` where the full word is `e_0^b e_1 word`.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.series.n_roots();
        let terms: Vec<_> = self
            .series
            .terms()
            .iter()
            .filter_map(|(w, x)| {
                let b = w.0.iter().take_while(|&&c| c == 0).count();
                (w.0.get(b) == Some(&1)).then(|| {
                    serde_json::json!({"b": b, "word": Word(w.0[b + 1..].to_vec()).to_text(n), "value": x})
                })
            })
            .collect();
        serde_json::json!({"terms": terms, "tail_valuation": self.tail_valuation})
    }
}

/// `e_0^b e_1 w`.
pub fn adjoint_word(b: usize, w: &Word) -> Word {
    let mut v = vec![0u8; b];
    v.push(1);
    v.extend_from_slice(&w.0);
    Word(v)
}

fn e0s_e1(s: u32) -> Vec<u8> {
    let mut v = vec![0u8; s as usize - 1];
    v.push(1);
    v
}

/// `Sigma^RT(g)` on the words `e_0^m e_1 e_0^{s-1} e_1`, `e_0^m e_1 e_0^{s_2-1} e_1 e_0^{s_1-1} e_1`
/// and `e_0^m e_1 e_0^{s_2-1} e_1 e_0^{r}` whose harmonic part has weight at most `max_weight`.
///
/// Coefficients are stored for every `m` where they can have valuation below
/// `prec`; all others have valuation at least `prec`.
pub fn sigma_rt(g: &dyn GSource, max_weight: u32, cfg: &RtConfig) -> Result<AdjointCoeffs<PAdicNum>> {
    let p = cfg.p;
    let t = cfg.prec;
    let l2 = rt_cutoff(t, 2, p);
    let m_max = l2 as usize + 3 + 2 * max_weight as usize;
    let series_w = m_max + 1 + max_weight as usize + 1;
    let ctx = PAdicCtx { p, prec: t };
    let mut series = NCSeries::zero(ctx, 1, series_w, Some(3));
    let mut put = |word: Word, x: PAdicNum| {
        if !x.is_exact_zero() {
            series.add_to(word, &x);
        }
    };
    let eval_key = |key: &RtKey, coef: &Q, d: usize, cutoff: u32| -> Result<PAdicNum> {
        let slack = coef_slack(cutoff, d, p);
        let mut term = PAdicNum::from_int(p, &num_bigint::BigInt::one(), t + slack);
        for gw in &key.gwords {
            term = term.mul(&g_value(g, gw, t + slack)?);
        }
        Ok(term.scale(coef).cap_precision(t))
    };
    // depth one and two targets: pure part
    for d in 1..=2usize {
        let cutoff = rt_cutoff(t, d, p);
        for w in crate::mhs::harmonic_words(1, max_weight, d).into_iter().filter(|w| w.depth() == d) {
            let entries: Vec<(u32, u32)> = w.s.iter().map(|&s| (s, 0)).collect();
            let exp = rt_expansion(&entries, cutoff)?;
            let weight = w.weight() as i64;
            let word = w.to_word();
            let mut by_m: BTreeMap<i64, PAdicNum> = BTreeMap::new();
            for (key, coef) in &exp.terms {
                if !key.hword.is_empty() {
                    continue;
                }
                let x = eval_key(key, coef, d, cutoff)?;
                let slot = by_m.entry(key.npow - weight).or_insert_with(|| PAdicNum::exact_zero(p));
                *slot = slot.add(&x);
            }
            for (m, x) in by_m {
                if m < 0 {
                    return Err(Error::Inconsistent(format!("negative e_0 power in Sigma^RT at {w}")));
                }
                put(adjoint_word(m as usize, &word), x.cap_precision(t));
            }
        }
    }
    // trailing e_0 words, read from the inner survivor family of (s_2, r + 1)
    let cutoff = rt_cutoff(t, 2, p);
    for s2 in 1..max_weight {
        for r in 1..=(max_weight - s2) {
            let exp = rt_expansion(&[(s2, 0), (r + 1, 0)], cutoff)?;
            let mut word = e0s_e1(s2);
            word.extend(std::iter::repeat(0u8).take(r as usize));
            let word = Word(word);
            let mut by_m: BTreeMap<i64, PAdicNum> = BTreeMap::new();
            for (key, coef) in &exp.terms {
                if key.survivors != [1] || key.hword != [(1, 0)] {
                    continue;
                }
                let x = eval_key(key, coef, 2, cutoff)?;
                let slot = by_m
                    .entry(key.npow - (s2 + r) as i64)
                    .or_insert_with(|| PAdicNum::exact_zero(p));
                *slot = slot.add(&x);
            }
            for (m, x) in by_m {
                if m < 0 {
                    return Err(Error::Inconsistent("negative e_0 power in a trailing family".into()));
                }
                put(adjoint_word(m as usize, &word), x.cap_precision(t));
            }
        }
    }
    Ok(AdjointCoeffs { series, tail_valuation: Some(t) })
}

/// `(a o^{DR-RT} h)_n(w)` for plain targets of depth at most two, from the
/// explicit low-depth formulas.
pub fn act_drrt_d12<S: Scalar>(
    a: &AdjointCoeffs<S>,
    h: &HarmonicSeq<S>,
    n: u64,
    target: &HarmonicWord,
) -> Result<S> {
    let ctx = a.series.ctx().clone();
    let b_max = a.max_weight();
    let npow = |e: i64| S::from_q(&ctx, &crate::mhs::q_pow(n as i64, e));
    let hv = |s: &[u32]| h.get(n, &plain_n1(s.to_vec()).to_loc());
    let mut hmin = 0i64;
    let mut track = |x: &S| {
        if let Some(v) = x.valuation_hint() {
            hmin = hmin.min(v);
        }
    };
    let res = match target.s.as_slice() {
        [s1] => {
            let s1 = *s1;
            let mut acc = hv(&[s1])?;
            let w = Word(e0s_e1(s1));
            for b in 0..=b_max {
                acc = acc.add(&npow((s1 as usize + b) as i64).mul(&a.get(b, &w)));
            }
            acc
        }
        [s2, s1] => {
            let (s2, s1) = (*s2, *s1);
            let mut acc = hv(&[s2, s1])?;
            let mut w21 = e0s_e1(s2);
            w21.extend(e0s_e1(s1));
            let w21 = Word(w21);
            for b in 0..=b_max {
                acc = acc.add(&npow((b as u32 + s2 + s1) as i64).mul(&a.get(b, &w21)));
            }
            let w1 = Word(e0s_e1(s1));
            for r2 in 0..s2 {
                let hx = hv(&[s2 - r2])?;
                track(&hx);
                let t = npow((r2 + s1) as i64).mul(&a.get(r2 as usize, &w1));
                acc = acc.add(&hx.mul(&t));
            }
            for r1 in 0..s1 {
                let hx = hv(&[s1 - r1])?;
                track(&hx);
                let mut wt = e0s_e1(s2);
                wt.extend(std::iter::repeat(0u8).take(r1 as usize));
                let wt = Word(wt);
                let mut inner = S::zero(&ctx);
                for b in 0..=b_max {
                    inner = inner.add(&npow((b as u32 + s2 + r1) as i64).mul(&a.get(b, &wt)));
                }
                acc = acc.add(&hx.mul(&inner));
            }
            acc
        }
        [] => hv(&[])?,
        _ => return Err(Error::Unsupported(format!("harmonic depth {} > 2", target.depth()))),
    };
    Ok(match a.tail_valuation {
        Some(tv) => res.cap_precision(tv + hmin),
        None => res,
    })
}

/// `Sigma^DR_inv(a)(w) = sum_{b>=0} a[e_0^b e_1 w]` (`Lambda = 1`) on every harmonic word
/// of depth at most `max_depth` present in `a`.
pub fn sigma_dr_inv<S: Scalar>(a: &AdjointCoeffs<S>, max_depth: usize) -> HarmonicCoeffs<S> {
    let graded = sigma_dr_inv_graded(a, max_depth);
    let ctx = a.series.ctx().clone();
    let mut out = HarmonicCoeffs::new(a.series.n_roots());
    for (w, layers) in graded {
        let mut acc = S::zero(&ctx);
        for x in layers.values() {
            acc = acc.add(x);
        }
        if let Some(tv) = a.tail_valuation {
            acc = acc.cap_precision(tv);
        }
        out.insert(w.to_loc(), acc);
    }
    out
}

/// Graded form: for each harmonic word `w`, the coefficient of `Lambda^{weight(w)+b}` is
/// `a[e_0^b e_1 w]`.
pub fn sigma_dr_inv_graded<S: Scalar>(
    a: &AdjointCoeffs<S>,
    max_depth: usize,
) -> BTreeMap<HarmonicWord, BTreeMap<usize, S>> {
    let mut out: BTreeMap<HarmonicWord, BTreeMap<usize, S>> = BTreeMap::new();
    for (word, x) in a.series.terms() {
        let b = word.0.iter().take_while(|&&c| c == 0).count();
        if word.0.get(b) != Some(&1) {
            continue;
        }
        let rest = Word(word.0[b + 1..].to_vec());
        let Ok(hw) = crate::words::to_harmonic(&rest, a.series.n_roots()) else { continue };
        if hw.depth() > max_depth {
            continue;
        }
        let k = hw.weight() as usize + b;
        out.entry(hw).or_default().insert(k, x.clone());
    }
    out
}

/// The series `Phi` with `Phi[e_0] = Phi[e_1] = 0`, `Phi[e_1^k] = 0` and
/// `Phi^{-1} e_1 Phi = a`, solved weight by weight from `e_1 Phi - Phi e_1 = Phi (a - e_1)`.
///
/// Only coefficients of `a` at words ending in `e_1` enter the solve. The
/// adjoint of the result is then compared with `a` up to weight `max_weight`
/// on words ending in `e_0`: on all of them when `strict`, otherwise on those
/// stored in `a`.
pub fn recover_phi<S: Scalar>(a: &NCSeries<S>, max_weight: usize, strict: bool) -> Result<NCSeries<S>> {
    let ctx = a.ctx().clone();
    let n_roots = a.n_roots();
    if n_roots != 1 {
        return Err(Error::Unsupported("recover_phi is implemented for N = 1".into()));
    }
    let depth = a.max_depth().map(|d| d.saturating_sub(1));
    let mut phi: NCSeries<S> = NCSeries::one(ctx.clone(), 1, max_weight, depth);
    let e1 = Word(vec![1]);
    let mut a_minus = a.clone();
    a_minus.add_to(e1.clone(), &S::one(&ctx).neg());
    for (w, x) in a_minus.terms() {
        if w.weight() <= 1 && x.zero_check() == ZeroCheck::NonZero {
            return Err(Error::Inconsistent(format!("a - e_1 has a term of weight <= 1 at '{w}'")));
        }
    }
    for k in 2..=max_weight {
        // R = Phi (a - e_1) restricted to weight k + 1, using Phi of weight <= k - 2
        let r = |v: &Word| -> S {
            let mut acc = S::zero(&ctx);
            for cut in 0..=v.weight() {
                let (x, y) = (Word(v.0[..cut].to_vec()), Word(v.0[cut..].to_vec()));
                if y.weight() < 2 {
                    continue;
                }
                let fx = phi.get(&x);
                if fx.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&fx.mul(&a_minus.get(&y)));
            }
            acc
        };
        let words: Vec<Word> = Word::enumerate(1, k, depth)
            .into_iter()
            .filter(|w| w.weight() == k)
            .collect();
        let mut solved: BTreeMap<Word, S> = BTreeMap::new();
        for x in &words {
            // x = e_1^j e_0 y: walk the chain of rotations to a word starting with e_0
            let j = x.0.iter().take_while(|&&c| c == 1).count();
            if j == k {
                let v = x.concat(&e1);
                if r(&v).zero_check() == ZeroCheck::NonZero {
                    return Err(Error::Inconsistent(format!(
                        "no solution at weight {k}: (Phi(a - e_1))[{}] != 0",
                        v.to_text(1)
                    )));
                }
                solved.insert(x.clone(), S::zero(&ctx));
                continue;
            }
            // Phi[e_1 x'] = Phi[x' e_1] - R[e_1 x' e_1]; Phi[e_0 x'] = -R[e_0 x' e_1]
            let mut cur = x.clone();
            let mut acc = S::zero(&ctx);
            loop {
                let v = cur.concat(&e1);
                if cur.0[0] == 0 {
                    acc = acc.sub(&r(&v));
                    break;
                }
                acc = acc.sub(&r(&v));
                let mut next = cur.0[1..].to_vec();
                next.push(1);
                cur = Word(next);
            }
            solved.insert(x.clone(), acc);
        }
        for (w, x) in solved {
            phi.set(w, x);
        }
    }
    let mut wide = NCSeries::zero(ctx.clone(), 1, max_weight, a.max_depth());
    for (w, x) in phi.terms() {
        wide.set(w.clone(), x.clone());
    }
    let adj = NCSeries::adjoint(&wide, &wide.word(e1))?;
    for w in Word::enumerate(1, max_weight, a.max_depth()) {
        if w.0.last() != Some(&0) || !(strict || a.terms().contains_key(&w)) {
            continue;
        }
        let diff = adj.get(&w).sub(&a.get(&w));
        if diff.zero_check() == ZeroCheck::NonZero {
            return Err(Error::Inconsistent(format!(
                "a is not an adjoint of e_1: mismatch at '{}'",
                w.to_text(1)
            )));
        }
    }
    Ok(phi)
}

/// Result of [`sigma_condition_report`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct SigmaConditionReport {
    /// `f[e_z] = f[e_0] = 0`.
    pub tilde_pi: Verdict,
    /// `v_p(f[w]) >= phi(weight, depth)` on every stored word.
    pub sigma_growth: bool,
    /// `(word, valuation, bound)` for every stored word; valuation `None` for exact zero.
    pub valuations: Vec<(String, Option<i64>, i64)>,
    pub failures: Vec<String>,
    /// Words known only as `O(p^k)` with `k` below the bound.
    pub undetermined: Vec<String>,
}

pub fn sigma_condition_report(
    f: &NCSeries<PAdicNum>,
    phi: impl Fn(usize, usize) -> i64,
) -> SigmaConditionReport {
    let mut tilde_pi = Verdict::Exact;
    for c in 0..=f.n_roots() as u8 {
        tilde_pi = tilde_pi.and(f.get(&Word(vec![c])).zero_check().into());
    }
    let mut valuations = Vec::new();
    let mut failures = Vec::new();
    let mut undetermined = Vec::new();
    for (w, x) in f.terms() {
        if w.is_empty() {
            continue;
        }
        let text = w.to_text(f.n_roots());
        let bound = phi(w.weight(), w.depth());
        let v = x.valuation();
        match v {
            Some(v) if v < bound && x.rel_prec() > 0 => failures.push(format!("{text}: valuation {v} < {bound}")),
            Some(v) if v < bound => undetermined.push(format!("{text}: O(p^{v}), bound {bound}")),
            _ => {}
        }
        valuations.push((text, v, bound));
    }
    SigmaConditionReport { tilde_pi, sigma_growth: failures.is_empty(), valuations, failures, undetermined }
}

/// `har_n` as a p-adic family, the `h` of the actions above.
pub fn har_family(cfg: &RtConfig, extra_prec: i64) -> HarmonicSeq<PAdicNum> {
    crate::mhs::har_seq_padic(crate::mhs::IndexSet::All, 1, 1, cfg.p, cfg.prec + extra_prec, 1)
}

/// Exact `har_{qn}(w)` as a p-adic number, for comparisons.
pub fn har_exact_padic(q: u64, n: u64, w: &HarmonicWordLoc, p: u64, prec: i64) -> Result<PAdicNum> {
    let x = crate::mhs::har((q * n) as i64, w, 1)?;
    Ok(PAdicNum::from_rational(p, x.as_rational().expect("N = 1"), prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CycRat;

    fn agree(a: &PAdicNum, b: &PAdicNum, prec: i64) -> bool {
        let d = a.sub(b);
        d.is_exact_zero() || d.valuation().unwrap() >= prec
    }

    fn cfg(prec: i64) -> RtConfig {
        RtConfig { p: 5, alpha: 1, prec }
    }

    #[test]
    fn act_rt_reproduces_har_qn() {
        let c = cfg(6);
        let g = HarPrimePower::new(5, 1, 40);
        let h = har_family(&c, 30);
        for s in [vec![1], vec![2], vec![1, 2], vec![2, 1], vec![3, 1]] {
            let w = plain_n1(s);
            for n in [2u64, 3] {
                let x = act_rt_d12(&g, &h, n, &w, &c).unwrap();
                let e = har_exact_padic(5, n, &w.to_loc(), 5, 30).unwrap();
                assert!(agree(&x, &e, 6), "{w} n={n}: {x} vs {e}");
            }
        }
    }

    #[test]
    fn act_rt_with_reversals() {
        let c = cfg(5);
        let g = HarPrimePower::new(5, 1, 40);
        let h = har_family(&c, 30);
        for entries in [vec![(1, 1)], vec![(1, 0), (0, 1)], vec![(2, 1), (1, 0)]] {
            let w = HarmonicWordWR { j: vec![1; entries.len() + 1], entries };
            let x = act_rt_wr_d12(&g, &h, 2, &w, &c).unwrap();
            let e = har_exact_padic(5, 2, &w.to_loc(), 5, 30).unwrap();
            assert!(agree(&x, &e, 5), "{w}: {x} vs {e}");
        }
    }

    #[test]
    fn depth_one_b_form_matches_engine() {
        let c = cfg(6);
        let g = HarPrimePower::new(5, 1, 40);
        let h = har_family(&c, 30);
        for s in 1..=3 {
            let a = act_rt_d1_b_form(&g, &h, 3, s, &c).unwrap();
            let b = act_rt_d12(&g, &h, 3, &plain_n1(vec![s]), &c).unwrap();
            assert!(agree(&a, &b, 6), "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn trailing_family_independent_of_inner_entry() {
        let cutoff = 6;
        for (s2, s1) in [(1u32, 3u32), (2, 3), (2, 4)] {
            let big = rt_expansion(&[(s2, 0), (s1, 0)], cutoff).unwrap();
            for r1 in 1..s1 {
                let small = rt_expansion(&[(s2, 0), (r1 + 1, 0)], cutoff).unwrap();
                let pick = |e: &RtExpansion, x: u32| -> BTreeMap<(Vec<Vec<(u32, u32)>>, i64), Q> {
                    e.terms
                        .iter()
                        .filter(|(k, _)| k.survivors == [1] && k.hword == [(x, 0)])
                        .map(|(k, v)| ((k.gwords.clone(), k.npow), v.clone()))
                        .collect()
                };
                assert_eq!(pick(&big, s1 - r1), pick(&small, 1), "({s2},{s1}) r1={r1}");
            }
        }
    }

    #[test]
    fn sigma_rt_factorizes_the_action() {
        let c = cfg(5);
        let g = HarPrimePower::new(5, 1, 40);
        let h = har_family(&c, 30);
        let a = sigma_rt(&g, 4, &c).unwrap();
        for s in [vec![2], vec![1, 1], vec![2, 1], vec![1, 3]] {
            let w = plain_n1(s);
            for n in [2u64, 3] {
                let x = act_drrt_d12(&a, &h, n, &w).unwrap();
                let e = har_exact_padic(5, n, &w.to_loc(), 5, 30).unwrap();
                assert!(agree(&x, &e, 5), "{w} n={n}: {x} vs {e}");
            }
        }
    }

    #[test]
    fn sigma_dr_inv_inverts_sigma_rt() {
        let c = cfg(5);
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 4, &c).unwrap();
        let back = sigma_dr_inv(&a, 2);
        for w in crate::mhs::harmonic_words(1, 4, 2) {
            if w.depth() == 0 {
                continue;
            }
            let x = back.get(&w.to_loc()).unwrap();
            let e = g.value(&w).unwrap();
            assert!(agree(x, &e, 5), "{w}: {x} vs {e}");
        }
        let graded = sigma_dr_inv_graded(&a, 1);
        let layers = &graded[&plain_n1(vec![2])];
        assert!(layers.keys().all(|&k| k >= 2));
    }

    fn exp_series(l: &NCSeries<CycRat>) -> NCSeries<CycRat> {
        let mut out = NCSeries::one(1, 1, l.max_weight(), l.max_depth());
        let mut pw = out.clone();
        for k in 1..=l.max_weight() {
            pw = pw.concat_mul(l).unwrap().scale(&CycRat::from_q(1, Q::new(1.into(), (k as i64).into())));
            out = out.add(&pw).unwrap();
        }
        out
    }

    #[test]
    fn recover_phi_round_trip() {
        let w = 6;
        let base = NCSeries::<CycRat>::zero(1, 1, w, None);
        let e0 = base.word(Word(vec![0]));
        let e1 = base.word(Word(vec![1]));
        let br = |x: &NCSeries<CycRat>, y: &NCSeries<CycRat>| x.concat_mul(y).unwrap().sub(&y.concat_mul(x).unwrap()).unwrap();
        let l1 = br(&e0, &e1);
        let l2 = br(&e0, &l1);
        let l3 = br(&e1, &l1);
        let lie = l1
            .scale(&CycRat::from_int(1, 3))
            .add(&l2.scale(&CycRat::from_int(1, -2)))
            .unwrap()
            .add(&l3.scale(&CycRat::from_q(1, Q::new(1.into(), 7.into()))))
            .unwrap();
        let phi = exp_series(&lie);
        let a = NCSeries::adjoint(&phi, &e1).unwrap();
        let got = recover_phi(&a, w - 1, true).unwrap();
        for word in Word::enumerate(1, w - 1, None) {
            assert_eq!(got.get(&word).coeffs(), phi.get(&word).coeffs(), "{word}");
        }
        let trivial = recover_phi(&e1, 4, true).unwrap();
        assert_eq!(trivial.len(), 1);
        let mut bad = a.clone();
        bad.add_to(Word(vec![0, 1, 0]), &CycRat::one(1));
        assert!(recover_phi(&bad, 4, true).is_err());
    }

    #[test]
    fn sigma_report_flags_low_valuations() {
        let ctx = PAdicCtx { p: 5, prec: 10 };
        let mut f = NCSeries::<PAdicNum>::zero(ctx, 1, 3, None);
        f.set(Word(vec![0, 1]), PAdicNum::from_int(5, &25.into(), 10));
        f.set(Word(vec![0, 0, 1]), PAdicNum::from_int(5, &5.into(), 10));
        let rep = sigma_condition_report(&f, |s, _| s as i64);
        assert!(rep.tilde_pi.holds());
        assert!(!rep.sigma_growth);
        assert_eq!(rep.failures.len(), 1);
    }

    #[test]
    fn recover_phi_from_sigma_rt() {
        let c = cfg(5);
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 5, &c).unwrap();
        let mut full = a.series.clone();
        full.add_to(Word(vec![1]), &PAdicNum::from_int(5, &1.into(), 5));
        let phi = recover_phi(&full, 5, false).unwrap();
        assert!(phi.get(&Word(vec![0, 1])).valuation().unwrap() >= 1);
    }

    #[test]
    fn act_rt_prime_square_and_p7() {
        let c = RtConfig { p: 5, alpha: 2, prec: 4 };
        let g = HarPrimePower::new(5, 2, 40);
        let h = har_family(&c, 30);
        for s in [vec![2], vec![1, 2]] {
            let w = plain_n1(s);
            let x = act_rt_d12(&g, &h, 2, &w, &c).unwrap();
            let e = har_exact_padic(25, 2, &w.to_loc(), 5, 30).unwrap();
            assert!(agree(&x, &e, 4), "{w}: {x} vs {e}");
        }
        let c = RtConfig { p: 7, alpha: 1, prec: 4 };
        let g = HarPrimePower::new(7, 1, 40);
        let h = har_family(&c, 30);
        for entries in [vec![(1, 1), (1, 0)], vec![(0, 2), (1, 1)]] {
            let w = HarmonicWordWR { j: vec![1; 3], entries };
            let x = act_rt_wr_d12(&g, &h, 2, &w, &c).unwrap();
            let e = har_exact_padic(7, 2, &w.to_loc(), 7, 30).unwrap();
            assert!(agree(&x, &e, 4), "{w}: {x} vs {e}");
        }
    }

    #[test]
    fn sigma_rt_of_zero_and_valuations() {
        let c = cfg(5);
        let zero: HarmonicCoeffs<PAdicNum> = {
            let mut z = HarmonicCoeffs::new(1);
            for w in crate::mhs::harmonic_words(1, 40, 2) {
                z.insert(w.to_loc(), PAdicNum::big_o(5, 60));
            }
            z
        };
        let a = sigma_rt(&zero, 3, &c).unwrap();
        assert!(a.series.terms().values().all(|x| x.is_indistinguishable_from_zero()));
        let g = HarPrimePower::new(5, 1, 40);
        let a = sigma_rt(&g, 4, &c).unwrap();
        let rep = sigma_condition_report(&a.series, |s, _| s as i64);
        assert!(rep.tilde_pi.holds());
        // the bound v >= weight is too strong: a[e_0^2 e_1 e_1] has valuation 3
        assert!(rep.failures.iter().any(|f| f.starts_with("0 0 1 1:")));
        let rep = sigma_condition_report(&a.series, |s, d| s as i64 - d as i64);
        assert!(rep.sigma_growth, "{:?}", rep.failures);
    }
}
