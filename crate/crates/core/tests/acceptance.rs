//! Acceptance suite: one PASS/FAIL line per criterion, each with its time budget.

use cycmzv::ihara::{har_family, sigma_rt, HarPrimePower, RtConfig};
use cycmzv::mhs::{frak_h_table, harmonic_words};
use cycmzv::pmzv::{check_har_dagger_convolution, check_li_dagger_shuffle, compute_adjoint_mzv, compute_li_dagger, compute_phi, FrobeniusConfig};
use cycmzv::relations::*;
use cycmzv::ncseries::quasi_shuffle_harmonic;
use cycmzv::scalars::rational::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use cycmzv::words::{HarmonicWord, Word};
use rayon::prelude::*;
use std::collections::HashMap;
use std::time::Instant;

type Outcome = cycmzv::Result<(bool, String)>;

fn summary(r: &RelationReport) -> String {
    format!("{} {} ({} checks)", r.relation, r.verdict, r.checked)
}

/// `a` in `Z[x]/(x^2 + 1)` or `Z`, as coefficient vectors.
fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    match (a, b) {
        ([a0], [b0]) => vec![a0 * b0],
        ([a0, a1], [b0, b1]) => vec![a0 * b0 - a1 * b1, a0 * b1 + a1 * b0],
        _ => unreachable!("degree at most two"),
    }
}

/// `frak_h_n(w) lcm(1..n-1)^{wt w}`, integral in `Z[xi_N]`.
fn scaled_table(w: &HarmonicWord, n_roots: u32, n_max: i64) -> cycmzv::Result<Vec<Vec<BigInt>>> {
    let raw = frak_h_table(n_max, w, n_roots);
    let mut lcm = BigInt::one();
    let mut out = Vec::with_capacity(raw.len());
    for (k, x) in raw.iter().enumerate() {
        let n = k as i64 + 1;
        if n > 1 {
            lcm = lcm.lcm(&BigInt::from(n - 1));
        }
        let scale = num_traits::pow(lcm.clone(), w.weight() as usize);
        let v = x
            .coeffs()
            .iter()
            .map(|c| {
                let y = c * Q::from_integer(scale.clone());
                if y.is_integer() {
                    Ok(y.to_integer())
                } else {
                    Err(cycmzv::Error::Inconsistent(format!("{w} at n={n} is not integral after scaling")))
                }
            })
            .collect::<cycmzv::Result<Vec<_>>>()?;
        out.push(v);
    }
    Ok(out)
}

/// Every side is scaled by `lcm(1..n-1)^{wt a + wt b}`, so the comparison stays exact.
fn criterion_1() -> Outcome {
    let n_max = 40i64;
    let mut details = Vec::new();
    let mut ok = true;
    for n_roots in [1u32, 2, 4] {
        let pairs = stuffle_pairs(n_roots, 6, 3);
        let words: Vec<HarmonicWord> = harmonic_words(n_roots, 6, 3).into_iter().filter(|w| w.depth() > 0).collect();
        let tables: HashMap<HarmonicWord, Vec<Vec<BigInt>>> = words
            .par_iter()
            .map(|w| Ok((w.clone(), scaled_table(w, n_roots, n_max)?)))
            .collect::<cycmzv::Result<_>>()?;
        let get = |w: &HarmonicWord| tables.get(w).ok_or_else(|| cycmzv::Error::Bound(format!("no table for {w}")));
        let mut checks = 0usize;
        let mut witness = None;
        for (a, b) in &pairs {
            let prod = quasi_shuffle_harmonic(a, b, n_roots)?;
            let (ta, tb) = (get(a)?, get(b)?);
            let terms: Vec<(&Vec<Vec<BigInt>>, BigInt)> =
                prod.iter().map(|(w, c)| Ok((get(w)?, BigInt::from(*c)))).collect::<cycmzv::Result<_>>()?;
            for n in 0..n_max as usize {
                let lhs = zmul(&ta[n], &tb[n]);
                let mut rhs = vec![BigInt::zero(); lhs.len()];
                for (t, c) in &terms {
                    for (r, x) in rhs.iter_mut().zip(&t[n]) {
                        *r += c * x;
                    }
                }
                checks += 1;
                if lhs != rhs && witness.is_none() {
                    witness = Some(format!("N={n_roots} n={} {a} * {b}", n + 1));
                }
            }
        }
        ok &= witness.is_none();
        details.push(format!(
            "N={n_roots}: {} pairs, {checks} identities, {}",
            pairs.len(),
            witness.unwrap_or_else(|| "exact".into())
        ));
    }
    Ok((ok, details.join("; ")))
}

fn criterion_2() -> Outcome {
    let r = check_li_bridge(4, 30)?;
    Ok((r.verdict == cycmzv::scalars::Verdict::Exact, summary(&r)))
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for p in [5u64, 7] {
        for alpha in [1u32, 2] {
            let r = check_reversal_reduction(p, alpha, 4, 6)?;
            ok &= r.verdict.holds_to(6);
            details.push(format!("p={p} a={alpha}: {}", r.verdict));
        }
    }
    Ok((ok, details.join("; ")))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for p in [5u64, 7] {
        let r = check_act_rt(&RtConfig { p, alpha: 1, prec: 6 }, 5, 4, 20)?;
        ok &= r.verdict.holds_to(6);
        details.push(format!("p={p}: {}", summary(&r)));
    }
    Ok((ok, details.join("; ")))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (p, alpha) in [(5u64, 1u32), (7, 1), (5, 2)] {
        let r = check_sigma_coherence(&RtConfig { p, alpha, prec: 6 }, 4, 5, &[1, 2, 3, 4, 5])?;
        ok &= r.verdict.holds_to(6);
        details.push(format!("p={p} a={alpha}: {}", summary(&r)));
    }
    Ok((ok, details.join("; ")))
}

fn criterion_6() -> Outcome {
    let r = check_b_quasi_shuffle(6, 30)?;
    Ok((r.verdict == cycmzv::scalars::Verdict::Exact, summary(&r)))
}

fn criterion_7() -> Outcome {
    let a = compute_adjoint_mzv(&FrobeniusConfig::new(5, 1, 7, 5))?;
    let r = check_adjoint_quasi_shuffle(&a, 6);
    Ok((r.verdict.holds_to(5), summary(&r)))
}

fn criterion_8() -> Outcome {
    let cfg = RtConfig { p: 5, alpha: 1, prec: 5 };
    let g = HarPrimePower::new(5, 1, 40);
    let a = sigma_rt(&g, 5, &cfg)?;
    let h = har_family(&cfg, 30);
    let triple = quasi_shuffle_triple(&a, &h, &[1, 2, 3, 4, 5], 4)?;
    let ok = triple.iter().all(|r| r.verdict.holds_to(5));
    Ok((ok, triple.iter().map(summary).collect::<Vec<_>>().join("; ")))
}

fn criterion_9() -> Outcome {
    let commutant = check_commutant(5);
    let results: Vec<(bool, bool, bool)> = (0..50u64)
        .into_par_iter()
        .map(|seed| -> cycmzv::Result<_> {
            let f = random_group_like(seed, 5, seed % 2 == 1)?;
            let p = check_prop73(&f)?;
            let d = check_depth11_equivalence(&f, 5)?;
            Ok((p.agree, d.agree, p.group_like.holds()))
        })
        .collect::<cycmzv::Result<_>>()?;
    let prop73 = results.iter().filter(|r| r.0).count();
    let depth11 = results.iter().filter(|r| r.1).count();
    let group_like = results.iter().filter(|r| r.2).count();
    let ok = commutant.holds() && prop73 == 50 && depth11 == 50;
    Ok((
        ok,
        format!(
            "{}; prop73 agreement {prop73}/50, depth-(1,1) agreement {depth11}/50 ({group_like} group-like)",
            summary(&commutant)
        ),
    ))
}

fn criterion_10() -> Outcome {
    let mut cfg = FrobeniusConfig::new(5, 1, 4, 6);
    cfg.z_degree = 40;
    let (_, phi) = compute_phi(&cfg)?;
    let li = compute_li_dagger(&cfg, &phi)?;
    let sh = check_li_dagger_shuffle(&li, 4)?;
    let e1 = Word(vec![1]);
    let e0 = Word(vec![0]);
    let conv = check_har_dagger_convolution(&li, &e0, &e1)?;
    let ok = sh.verdict.holds_to(4) && conv.verdict.holds_to(4);
    Ok((ok, format!("{}; {}", summary(&sh), summary(&conv))))
}

fn criterion_11() -> Outcome {
    let words: Vec<HarmonicWord> =
        std::iter::once(HarmonicWord { s: vec![], j: vec![1] }).chain(harmonic_words(1, 4, 2)).collect();
    let r = rank_independence(&words, 60, 2)?;
    Ok((r.holds(), format!("rank {} of {}", r.instance["rank"], r.instance["columns"])))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("stuffle oracle", 60, criterion_1),
        ("Li/reversal bridge", 60, criterion_2),
        ("reversal reduction", 120, criterion_3),
        ("RT action vs exact har_qn", 300, criterion_4),
        ("comparison-map coherence", 120, criterion_5),
        ("B quasi-shuffle", 30, criterion_6),
        ("adjoint quasi-shuffle of zeta^Ad", 300, criterion_7),
        ("quasi-shuffle triple", 300, criterion_8),
        ("commutant, shuffle characterizations, depth-(1,1)", 180, criterion_9),
        ("Li dagger shuffle convolution", 600, criterion_10),
        ("independence rank", 60, criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = secs <= *budget as f64;
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{secs:.1}s / {budget}s]",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
