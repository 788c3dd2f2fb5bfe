//! End-to-end p-adic pipeline: prime weighted harmonic sums, adjoint p-adic
//! multiple zeta values, the Frobenius associator, and the overconvergent
//! hyperlogarithm `Li†` with its regularized harmonic sums `har†`.

use crate::error::{Error, Result};
use crate::ihara::{recover_phi, sigma_rt, AdjointCoeffs, HarPrimePower, RtConfig};
use crate::ncseries::{shuffle_words, NCSeries};
use crate::relations::RelationReport;
use crate::scalars::rational::Q;
use crate::scalars::{PAdicCtx, PAdicNum, Scalar, Verdict, ZeroCheck};
use crate::words::Word;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Parameters of the Frobenius pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusConfig {
    pub p: u64,
    pub alpha: u32,
    pub n_roots: u32,
    /// Weight truncation `W`.
    pub max_weight: u32,
    /// Absolute precision `M`: results are certified modulo `p^M`.
    pub prec: i64,
    /// Highest power of `z` kept for `Li†`.
    pub z_degree: usize,
}

impl FrobeniusConfig {
    pub fn new(p: u64, alpha: u32, max_weight: u32, prec: i64) -> Self {
        FrobeniusConfig { p, alpha, n_roots: 1, max_weight, prec, z_degree: 0 }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.alpha)
    }

    pub fn rt(&self) -> RtConfig {
        RtConfig { p: self.p, alpha: self.alpha, prec: self.prec }
    }

    pub fn ctx(&self) -> PAdicCtx {
        PAdicCtx { p: self.p, prec: self.prec }
    }

    fn validate(&self) -> Result<()> {
        if self.n_roots != 1 {
            return Err(Error::Unsupported("the Frobenius pipeline is implemented for N = 1".into()));
        }
        if self.p < 3 || (2..).take_while(|d| d * d <= self.p).any(|d| self.p % d == 0) {
            return Err(Error::InvalidArgument(format!("p = {} must be an odd prime", self.p)));
        }
        if self.alpha == 0 || self.prec <= 0 || self.max_weight == 0 {
            return Err(Error::InvalidArgument("alpha, prec and max_weight must be positive".into()));
        }
        Ok(())
    }
}

/// `Phi^{-1} e_1 Phi` from the prime weighted harmonic sums `har_{p^alpha}`, including `a[e_1] = 1`.
pub fn compute_adjoint_mzv(cfg: &FrobeniusConfig) -> Result<AdjointCoeffs<PAdicNum>> {
    cfg.validate()?;
    let g = HarPrimePower::new(cfg.p, cfg.alpha, cfg.prec + 35);
    let mut a = sigma_rt(&g, cfg.max_weight, &cfg.rt())?;
    let e1 = Word(vec![1]);
    if a.series.get(&e1).is_exact_zero() {
        a.series.set(e1, PAdicNum::one(&cfg.ctx()));
    }
    Ok(a)
}

/// Labelled view: every stored coefficient with `zeta_ad(w) = (-1)^depth(w) a[w]`.
pub fn zeta_ad_view(a: &AdjointCoeffs<PAdicNum>) -> Value {
    let rows: Vec<Value> = a
        .series
        .terms()
        .iter()
        .map(|(w, x)| {
            let z = if w.depth() % 2 == 0 { x.clone() } else { x.neg() };
            json!({
                "word": w.to_text(1),
                "coefficient": x.to_string(),
                "zeta_ad": z.to_string(),
                "abs_prec": x.abs_prec(),
            })
        })
        .collect();
    json!({"kind": "zeta_ad", "tail_valuation": a.tail_valuation, "terms": rows})
}

/// The Frobenius associator `Phi_{p,alpha}` recovered from its adjoint, with `Phi[e_1^k] = 0`.
pub fn compute_phi(cfg: &FrobeniusConfig) -> Result<(AdjointCoeffs<PAdicNum>, NCSeries<PAdicNum>)> {
    let a = compute_adjoint_mzv(cfg)?;
    let phi = recover_phi(&a.series, cfg.max_weight as usize, false)?;
    Ok((a, phi))
}

/// Labelled view of `Phi` with `zeta(w) = (-1)^depth(w) Phi[w]`.
pub fn zeta_view(phi: &NCSeries<PAdicNum>) -> Value {
    let rows: Vec<Value> = phi
        .terms()
        .iter()
        .map(|(w, x)| {
            let z = if w.depth() % 2 == 0 { x.clone() } else { x.neg() };
            json!({"word": w.to_text(1), "coefficient": x.to_string(), "zeta": z.to_string(), "abs_prec": x.abs_prec()})
        })
        .collect();
    json!({"kind": "phi", "terms": rows})
}

/// `sum_w zeta(w) w = Phi(e_0, -e_1)`; its adjoint satisfies `e_0 + a + a(e_0, e_inf) = 0`.
pub fn zeta_series(phi: &NCSeries<PAdicNum>) -> Result<NCSeries<PAdicNum>> {
    let e0 = phi.word(Word(vec![0]));
    let e1 = phi.word(Word(vec![1]));
    phi.substitute(&[e0, e1.neg()])
}

// ---------------------------------------------------------------------------
// Series in z with non-commutative coefficients

/// `sum_k z^k F_k` truncated at `z^K`, every `F_k` with the same word truncation.
#[derive(Debug, Clone)]
pub struct ZSeries<S: Scalar> {
    pub coeffs: Vec<NCSeries<S>>,
}

impl<S: Scalar> ZSeries<S> {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> Option<&NCSeries<S>> {
        self.coeffs.get(k)
    }

    /// Coefficient of `z^k w`.
    pub fn coeff(&self, k: usize, w: &Word) -> Result<S> {
        self.coeffs
            .get(k)
            .map(|f| f.get(w))
            .ok_or_else(|| Error::Bound(format!("z-degree {k} beyond {}", self.degree())))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let k_max = self.degree().min(o.degree());
        let coeffs = (0..=k_max)
            .into_par_iter()
            .map(|n| {
                let mut acc = self.coeffs[0].empty_like();
                for k in 0..=n {
                    if self.coeffs[k].is_empty() || o.coeffs[n - k].is_empty() {
                        continue;
                    }
                    acc = acc.add(&self.coeffs[k].concat_mul(&o.coeffs[n - k])?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ZSeries { coeffs })
    }

    /// Inverse when the degree-0 coefficient is invertible: `H_0 = F_0^{-1}`,
    /// `H_n = -F_0^{-1} sum_{k=1}^{n} F_k H_{n-k}`.
    pub fn inverse(&self) -> Result<Self> {
        let f0_inv = self.coeffs[0].inverse()?;
        let mut h = vec![f0_inv.clone()];
        for n in 1..=self.degree() {
            let mut acc = self.coeffs[0].empty_like();
            for k in 1..=n {
                if self.coeffs[k].is_empty() || h[n - k].is_empty() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].concat_mul(&h[n - k])?)?;
            }
            h.push(f0_inv.concat_mul(&acc)?.neg());
        }
        Ok(ZSeries { coeffs: h })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(k, f)| {
                f.terms()
                    .iter()
                    .map(move |(w, x)| json!({"z_degree": k, "word": w.to_text(f.n_roots()), "value": x.to_string()}))
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({"kind": "li_dagger", "z_degree": self.degree(), "terms": rows})
    }
}

/// Coefficients `f_n[w]` of the factor `f` in `Li^KZ(z) = f(z) exp(e_0 log z)`, `f(0) = 1`,
/// for `n <= z_degree` and words of weight at most `max_weight` (N = 1).
/// `n f_n[w] = [w = e_0 u] f_n[u] + [w = e_1 u] sum_{m<n} f_m[u] - [w = u e_0] f_n[u]`.
pub fn li_holomorphic_table(max_weight: usize, z_degree: usize) -> Vec<BTreeMap<Word, Q>> {
    let mut words = Word::enumerate(1, max_weight, None);
    words.sort_by_key(|w| w.weight());
    let mut table: Vec<BTreeMap<Word, Q>> = vec![BTreeMap::new(); z_degree + 1];
    table[0].insert(Word::empty(), Q::one());
    // running sums S_n[u] = sum_{m<n} f_m[u]
    let mut partial: BTreeMap<Word, Q> = BTreeMap::new();
    for n in 1..=z_degree {
        for (u, x) in &table[n - 1] {
            *partial.entry(u.clone()).or_insert_with(Q::zero) += x;
        }
        let nq = Q::from_integer(n.into());
        let mut row: BTreeMap<Word, Q> = BTreeMap::new();
        for w in words.iter().filter(|w| !w.is_empty()) {
            let rest = Word(w.0[1..].to_vec());
            let mut x = if w.0[0] == 0 {
                row.get(&rest).cloned().unwrap_or_else(Q::zero)
            } else {
                partial.get(&rest).cloned().unwrap_or_else(Q::zero)
            };
            if *w.0.last().unwrap() == 0 {
                let init = Word(w.0[..w.0.len() - 1].to_vec());
                x -= row.get(&init).cloned().unwrap_or_else(Q::zero);
            }
            if !x.is_zero() {
                row.insert(w.clone(), x / &nq);
            }
        }
        table[n] = row;
    }
    table
}

/// `Li†(z) = f(z)(q e_0, q e_1) . f(z^q)(e_0, A)^{-1}` with `A = Phi^{-1} e_1 Phi`, for words of
/// weight at most `cfg.max_weight` and `z`-degree at most `cfg.z_degree`.
/// A depth cap `d` on `Phi` determines `A` through weight `d + 2`.
pub fn compute_li_dagger(cfg: &FrobeniusConfig, phi: &NCSeries<PAdicNum>) -> Result<ZSeries<PAdicNum>> {
    cfg.validate()?;
    let w = cfg.max_weight as usize;
    if let Some(d) = phi.max_depth() {
        if w > d + 2 {
            return Err(Error::Bound(format!("Phi of depth {d} determines Phi^{{-1}} e_1 Phi only to weight {}", d + 2)));
        }
    }
    if phi.max_weight() < w {
        return Err(Error::Bound(format!("Phi known to weight {} < {w}", phi.max_weight())));
    }
    let adjoint = crate::relations::adjoint_e1(phi)?;
    let k_max = cfg.z_degree;
    let q = cfg.q() as usize;
    let work = PAdicCtx { p: cfg.p, prec: cfg.prec + 4 * w as i64 + 20 };
    let f = li_holomorphic_table(w, k_max);
    let base = NCSeries::<PAdicNum>::zero(work, 1, w, None);
    let mut a = base.empty_like();
    for (v, x) in adjoint.terms() {
        if v.weight() <= w {
            a.set(v.clone(), x.clone());
        }
    }
    if a.get(&Word(vec![1])).sub(&PAdicNum::one(&work)).zero_check() == ZeroCheck::NonZero {
        return Err(Error::InvalidArgument("adjoint must have a[e_1] = 1".into()));
    }
    a.set(Word(vec![1]), PAdicNum::one(&work));
    let images = [base.word(Word(vec![0])), a];
    let q_rat = Q::from_integer(q.into());
    let left = ZSeries {
        coeffs: f
            .iter()
            .map(|row| {
                let mut s = base.empty_like();
                for (v, x) in row {
                    let scaled = x * num_traits::pow(q_rat.clone(), v.weight());
                    s.set(v.clone(), PAdicNum::from_q(&work, &scaled));
                }
                s
            })
            .collect(),
    };
    let right_coeffs = (0..=k_max)
        .into_par_iter()
        .map(|k| -> Result<NCSeries<PAdicNum>> {
            if k % q != 0 {
                return Ok(base.empty_like());
            }
            let mut s = base.empty_like();
            for (v, x) in &f[k / q] {
                s.set(v.clone(), PAdicNum::from_q(&work, x));
            }
            s.substitute(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    let right = ZSeries { coeffs: right_coeffs };
    if right.coeffs[0].get(&Word::empty()).sub(&PAdicNum::one(&work)).zero_check() == ZeroCheck::NonZero {
        return Err(Error::InvalidArgument("degree-0 term of the Frobenius factor is not 1".into()));
    }
    let li = left.mul(&right.inverse()?)?;
    let cap = cfg.prec;
    Ok(ZSeries {
        coeffs: li
            .coeffs
            .into_iter()
            .map(|s| {
                let mut out = NCSeries::zero(cfg.ctx(), 1, w, None);
                for (v, x) in s.terms() {
                    out.set(v.clone(), x.cap_precision(cap));
                }
                out
            })
            .collect(),
    })
}

/// `har†_n(w) = n^{wt w} Li†[w][z^n]`.
pub fn har_dagger(li: &ZSeries<PAdicNum>, n: usize, w: &Word) -> Result<PAdicNum> {
    let x = li.coeff(n, w)?;
    Ok(x.scale(&num_traits::pow(Q::from_integer(n.into()), w.weight())))
}

/// Shuffle convolution of `Li†`: `Li†[∅] = 1`, `Li†[w][z^0] = 0` for nonempty `w`, and
/// `sum_{m=1}^{n-1} Li†[u][z^m] Li†[v][z^{n-m}] = Li†[u ш v][z^n]` for nonempty `u, v`
/// with `wt u + wt v <= max_weight`.
pub fn check_li_dagger_shuffle(li: &ZSeries<PAdicNum>, max_weight: usize) -> Result<RelationReport> {
    let words: Vec<Word> = Word::enumerate(1, max_weight, None).into_iter().filter(|w| !w.is_empty()).collect();
    let mut pairs = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for v in &words[i..] {
            if u.weight() + v.weight() <= max_weight {
                pairs.push((u.clone(), v.clone()));
            }
        }
    }
    let k_max = li.degree();
    let mut verdict = Verdict::Exact;
    let mut witness = None;
    let mut checked = 0;
    let mut note = |z: ZeroCheck, at: Value, lhs: &PAdicNum, rhs: &PAdicNum| {
        checked += 1;
        verdict = verdict.and(z.into());
        if z == ZeroCheck::NonZero && witness.is_none() {
            witness = Some(json!({"at": at, "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
        }
    };
    let ctx = *li.coeffs[0].ctx();
    let one = PAdicNum::one(&ctx);
    for n in 0..=k_max {
        let e = li.coeff(n, &Word::empty())?;
        let target = if n == 0 { one.clone() } else { PAdicNum::zero(&ctx) };
        note(e.sub(&target).zero_check(), json!({"n": n, "word": ""}), &e, &target);
    }
    for w in &words {
        let x = li.coeff(0, w)?;
        note(x.zero_check(), json!({"n": 0, "word": w.to_text(1)}), &x, &PAdicNum::zero(&ctx));
    }
    let results: Vec<Vec<(ZeroCheck, Value, PAdicNum, PAdicNum)>> = pairs
        .par_iter()
        .map(|(u, v)| {
            let sh = shuffle_words(u, v);
            (1..=k_max)
                .map(|n| {
                    let mut lhs = PAdicNum::zero(&ctx);
                    for m in 1..n {
                        lhs = lhs.add(&li.coeffs[m].get(u).mul(&li.coeffs[n - m].get(v)));
                    }
                    let mut rhs = PAdicNum::zero(&ctx);
                    for (w, c) in &sh {
                        rhs = rhs.add(&li.coeffs[n].get(w).scale(&Q::from_integer((*c).into())));
                    }
                    let z = lhs.sub(&rhs).zero_check();
                    (z, json!({"n": n, "u": u.to_text(1), "v": v.to_text(1)}), lhs, rhs)
                })
                .collect()
        })
        .collect();
    for (z, at, l, r) in results.into_iter().flatten() {
        note(z, at, &l, &r);
    }
    Ok(RelationReport {
        relation: "li-dagger-shuffle".into(),
        instance: json!({"z_degree": k_max, "max_weight": max_weight, "p": ctx.p}),
        verdict,
        witness,
        checked,
    })
}

/// The same convolution in weighted form:
/// `sum_{m=1}^{n-1} har†_m(u) har†_{n-m}(v) n^{wt u + wt v} / (m^{wt u} (n-m)^{wt v}) = har†_n(u ш v)`.
pub fn check_har_dagger_convolution(li: &ZSeries<PAdicNum>, u: &Word, v: &Word) -> Result<RelationReport> {
    let ctx = *li.coeffs[0].ctx();
    let sh = shuffle_words(u, v);
    let (wu, wv) = (u.weight(), v.weight());
    let mut verdict = Verdict::Exact;
    let mut witness = None;
    for n in 1..=li.degree() {
        let mut lhs = PAdicNum::zero(&ctx);
        for m in 1..n {
            let wgt = num_traits::pow(Q::from_integer(n.into()), wu + wv)
                / (num_traits::pow(Q::from_integer(m.into()), wu) * num_traits::pow(Q::from_integer((n - m).into()), wv));
            lhs = lhs.add(&har_dagger(li, m, u)?.mul(&har_dagger(li, n - m, v)?).scale(&wgt));
        }
        let mut rhs = PAdicNum::zero(&ctx);
        for (w, c) in &sh {
            rhs = rhs.add(&har_dagger(li, n, w)?.scale(&Q::from_integer((*c).into())));
        }
        let z = lhs.sub(&rhs).zero_check();
        verdict = verdict.and(z.into());
        if z == ZeroCheck::NonZero && witness.is_none() {
            witness = Some(json!({"n": n, "lhs": lhs.to_string(), "rhs": rhs.to_string()}));
        }
    }
    Ok(RelationReport {
        relation: "har-dagger-convolution".into(),
        instance: json!({"u": u.to_text(1), "v": v.to_text(1), "z_degree": li.degree()}),
        verdict,
        witness,
        checked: li.degree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{adjoint_e1, check_adjoint_quasi_shuffle, check_shuffle};

    fn cfg(alpha: u32, w: u32, prec: i64, k: usize) -> FrobeniusConfig {
        let mut c = FrobeniusConfig::new(5, alpha, w, prec);
        c.z_degree = k;
        c
    }

    fn agree(a: &PAdicNum, b: &PAdicNum, m: i64) -> bool {
        let d = a.sub(b);
        d.is_exact_zero() || d.valuation().is_some_and(|v| v >= m)
    }

    #[test]
    fn holomorphic_factor_matches_li_and_is_group_like() {
        let (w, k) = (4, 12);
        let f = li_holomorphic_table(w, k);
        for word in Word::enumerate(1, w, None) {
            if word.0.last() == Some(&0) {
                continue;
            }
            let c = crate::mhs::li_coeffs(&word, k, 1);
            for n in 0..=k {
                let x = f[n].get(&word).cloned().unwrap_or_else(Q::zero);
                assert_eq!(Some(&x), c[n].as_rational(), "{word} n={n}");
            }
        }
        let get = |n: usize, v: &Word| f[n].get(v).cloned().unwrap_or_else(Q::zero);
        for (u, v) in [(vec![0], vec![1]), (vec![1, 0], vec![0]), (vec![0], vec![0, 1, 0]), (vec![1], vec![1, 0])] {
            let (u, v) = (Word(u), Word(v));
            for n in 0..=k {
                let lhs: Q = (0..=n).map(|m| get(m, &u) * get(n - m, &v)).sum();
                let rhs: Q = shuffle_words(&u, &v).iter().map(|(x, c)| get(n, x) * Q::from_integer((*c).into())).sum();
                assert_eq!(lhs, rhs, "{u} {v} n={n}");
            }
        }
        assert!(f.iter().all(|row| !row.contains_key(&Word(vec![0]))));
    }

    #[test]
    fn adjoint_mzv_properties() {
        let a = compute_adjoint_mzv(&cfg(1, 5, 5, 0)).unwrap();
        assert!(check_adjoint_quasi_shuffle(&a, 4).verdict.holds_to(5));
        let finer = compute_adjoint_mzv(&cfg(1, 5, 6, 0)).unwrap();
        for (w, x) in a.series.terms() {
            assert!(agree(x, &finer.series.get(w), 5), "{w}: {x} vs {}", finer.series.get(w));
        }
        // the alpha-dependence of a weight-k coefficient starts at relative order p^k
        let a1 = compute_adjoint_mzv(&cfg(1, 3, 8, 0)).unwrap();
        let a2 = compute_adjoint_mzv(&cfg(2, 3, 8, 0)).unwrap();
        let w = Word(vec![0, 0, 1, 1]);
        let (x1, x2) = (a1.series.get(&w), a2.series.get(&w));
        assert!(agree(&x1, &x2, 6) && !agree(&x1, &x2, 7), "{x1} vs {x2}");
        let view = zeta_ad_view(&a);
        assert!(view["terms"].as_array().unwrap().iter().any(|t| t["word"] == "1"));
    }

    #[test]
    fn phi_is_group_like_and_round_trips() {
        let (a, phi) = compute_phi(&cfg(1, 5, 5, 0)).unwrap();
        assert!(check_shuffle(&phi).verdict.holds_to(5));
        assert!(phi.get(&Word(vec![0])).is_exact_zero() && phi.get(&Word(vec![1])).is_exact_zero());
        let back = adjoint_e1(&phi).unwrap();
        for (w, x) in a.series.terms().iter().filter(|(w, _)| w.weight() <= phi.max_weight()) {
            assert!(agree(x, &back.get(w), 5), "{w}");
        }
        assert_eq!(zeta_view(&phi)["kind"], "phi");
    }

    #[test]
    fn li_dagger_shuffle_convolution() {
        let c = cfg(1, 4, 7, 40);
        let (_, phi) = compute_phi(&c).unwrap();
        let li = compute_li_dagger(&c, &phi).unwrap();
        assert_eq!(li.degree(), 40);
        assert!(agree(&li.coeff(0, &Word::empty()).unwrap(), &PAdicNum::one(&c.ctx()), 7));
        let r = check_li_dagger_shuffle(&li, 4).unwrap();
        assert!(r.verdict.holds_to(5), "{}", r.to_json_line());
        let e1 = Word(vec![1]);
        let r = check_har_dagger_convolution(&li, &e1, &e1).unwrap();
        assert!(r.verdict.holds_to(5), "{}", r.to_json_line());
        let x = har_dagger(&li, 3, &e1).unwrap();
        assert!(agree(&x, &li.coeff(3, &e1).unwrap().scale(&Q::from_integer(3.into())), 5));
        assert!(har_dagger(&li, 41, &e1).is_err());
    }

    #[test]
    fn li_dagger_detects_a_wrong_associator() {
        let c = cfg(1, 4, 6, 10);
        let (_, mut phi) = compute_phi(&c).unwrap();
        phi.add_to(Word(vec![0, 0, 1]), &PAdicNum::from_int(5, &1.into(), 6));
        let li = compute_li_dagger(&c, &phi).unwrap();
        assert!(!check_li_dagger_shuffle(&li, 4).unwrap().holds());
    }

    #[test]
    fn configuration_errors() {
        let mut c = cfg(1, 4, 5, 5);
        c.n_roots = 2;
        assert!(compute_adjoint_mzv(&c).is_err());
        assert!(compute_adjoint_mzv(&FrobeniusConfig::new(9, 1, 3, 4)).is_err());
        let (_, phi) = compute_phi(&cfg(1, 5, 5, 0)).unwrap();
        assert!(compute_li_dagger(&cfg(1, 5, 5, 5), &phi).is_err());
    }
}
