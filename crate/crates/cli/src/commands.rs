//! Subcommand bodies: parse the instance, call the library, shape the output.

use crate::render::{Checked, Output};
use crate::*;
use cycmzv::ihara::{self, har_family, HarPrimePower, RtConfig};
use cycmzv::mhs::{self, BTable};
use cycmzv::pmzv::{self, FrobeniusConfig};
use cycmzv::relations::{self, RelationReport};
use cycmzv::scalars::{CycRat, Scalar};
use cycmzv::words::{parse_harmonic, parse_plain_word, HarmonicWord, Word};
use cycmzv::{Error, Result};
use serde_json::json;
use std::collections::HashMap;

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Mhs { cmd } => mhs_cmd(cmd),
        Command::Bcoef(a) => bcoef(a),
        Command::Li { cmd: LiCmd::Coeff { word, n, roots } } => {
            let w = parse_plain_word(word, roots.roots)?;
            let x = mhs::li_coeff(&w, *n, roots.roots)?;
            Ok(Output::value(vec![("word", w.to_text(roots.roots)), ("n", n.to_string())], x))
        }
        Command::Ihara { cmd } => ihara_cmd(cmd),
        Command::Pmzv { cmd } => pmzv_cmd(cmd),
        Command::Verify(a) => verify(a, cli.seed).map(Output::Reports),
        Command::Independence { cmd: IndependenceCmd::Rank { max_weight, depth, degree, n_max } } => {
            let words: Vec<HarmonicWord> = std::iter::once(HarmonicWord { s: vec![], j: vec![1] })
                .chain(mhs::harmonic_words(1, *max_weight, *depth).into_iter().filter(|w| w.depth() > 0))
                .collect();
            let r = relations::rank_independence(&words, *n_max, *degree)?;
            Ok(Output::Reports(vec![Checked::exact(r)]))
        }
    }
}

fn rt(p: &PadicArgs) -> RtConfig {
    RtConfig { p: p.p, alpha: p.alpha, prec: p.prec }
}

fn frobenius(p: &PadicArgs, max_weight: u32) -> FrobeniusConfig {
    FrobeniusConfig::new(p.p, p.alpha, max_weight, p.prec)
}

fn check_padic(p: &PadicArgs) -> Result<()> {
    if p.p < 3 || (2..).take_while(|d| d * d <= p.p).any(|d| p.p % d == 0) {
        return Err(Error::InvalidArgument(format!("--p {} must be an odd prime", p.p)));
    }
    if p.alpha == 0 || p.prec <= 0 {
        return Err(Error::InvalidArgument("--alpha and --prec must be positive".into()));
    }
    Ok(())
}

fn source(p: &PadicArgs) -> HarPrimePower {
    HarPrimePower::new(p.p, p.alpha, p.prec + 34)
}

fn mhs_cmd(cmd: &MhsCmd) -> Result<Output> {
    let value = |n: i64, text: &str, weighted: bool, roots: u32| -> Result<(String, CycRat)> {
        let w = parse_harmonic(text, roots)?;
        let x = if weighted { mhs::har(n, &w, roots)? } else { mhs::frak_h(n, &w, roots)? };
        Ok((w.to_string(), x))
    };
    match cmd {
        MhsCmd::Eval { n, word, weighted, roots } => {
            let (w, x) = value(*n, word, *weighted, roots.roots)?;
            Ok(Output::value(vec![("n", n.to_string()), ("word", w)], x))
        }
        MhsCmd::Table { n_min, n_max, words, weighted, roots } => {
            if n_min > n_max {
                return Err(Error::InvalidArgument(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for n in *n_min..=*n_max {
                for text in words {
                    let (w, x) = value(n, text, *weighted, roots.roots)?;
                    items.push(json!({"n": n, "word": w, "value": x.to_string()}));
                    rows.push(vec![n.to_string(), w, x.to_string()]);
                }
            }
            let json = json!({"N": roots.roots, "weighted": weighted, "rows": items});
            Ok(Output::Table { json, header: vec!["n", "word", "value"], rows })
        }
    }
}

fn bcoef(a: &BcoefArgs) -> Result<Output> {
    let table = BTable::new(a.l.iter().copied().max().unwrap_or(0).max(0));
    let poly = table.poly(&a.l)?;
    let l_text = a.l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    match a.b {
        Some(b) => Ok(Output::value(vec![("l", l_text), ("b", b.to_string())], poly.coeff(b))),
        None => {
            let rows: Vec<Vec<String>> =
                poly.0.iter().enumerate().map(|(b, c)| vec![b.to_string(), c.to_string()]).collect();
            Ok(Output::Table { json: table.to_json(&a.l)?, header: vec!["b", "coefficient"], rows })
        }
    }
}

fn series_rows<S: Scalar>(f: &cycmzv::ncseries::NCSeries<S>) -> Vec<Vec<String>> {
    f.terms().iter().map(|(w, x)| vec![w.to_text(f.n_roots()), x.to_string()]).collect()
}

fn ihara_cmd(cmd: &IharaCmd) -> Result<Output> {
    match cmd {
        IharaCmd::ActRt { padic, n, word, compare } => {
            check_padic(padic)?;
            let w = parse_harmonic(word, 1)?;
            let wr = w.to_wr().ok_or_else(|| Error::InvalidWord(format!("{w}: entries must be nonnegative")))?;
            let cfg = rt(padic);
            let x = ihara::act_rt_wr_d12(&source(padic), &har_family(&cfg, 30), *n, &wr, &cfg)?;
            let mut fields = vec![("p", padic.p.to_string()), ("alpha", padic.alpha.to_string()), ("n", n.to_string()), ("word", w.to_string())];
            if *compare {
                let e = ihara::har_exact_padic(cfg.q(), *n, &w, padic.p, padic.prec)?;
                fields.push(("exact", e.to_string()));
            }
            Ok(Output::value(fields, x))
        }
        IharaCmd::ActDrrt { padic, n, word, max_weight } => {
            check_padic(padic)?;
            let w = parse_harmonic(word, 1)?;
            let plain = w.to_plain().ok_or_else(|| Error::InvalidWord(format!("{w}: plain word expected")))?;
            let cfg = rt(padic);
            let a = ihara::sigma_rt(&source(padic), *max_weight, &cfg)?;
            let x = ihara::act_drrt_d12(&a, &har_family(&cfg, 30), *n, &plain)?;
            Ok(Output::value(vec![("p", padic.p.to_string()), ("n", n.to_string()), ("word", w.to_string())], x))
        }
        IharaCmd::SigmaRt { padic, max_weight } => {
            check_padic(padic)?;
            let a = ihara::sigma_rt(&source(padic), *max_weight, &rt(padic))?;
            Ok(Output::Table { json: a.to_json(), header: vec!["word", "value"], rows: series_rows(&a.series) })
        }
        IharaCmd::SigmaDrinv { padic, max_weight, depth } => {
            check_padic(padic)?;
            let a = ihara::sigma_rt(&source(padic), *max_weight, &rt(padic))?;
            let h = ihara::sigma_dr_inv(&a, *depth);
            let rows = h.iter().map(|(w, x)| vec![w.to_string(), x.to_string()]).collect();
            Ok(Output::Table { json: h.to_json(), header: vec!["word", "value"], rows })
        }
        IharaCmd::RecoverPhi { padic, max_weight } => {
            check_padic(padic)?;
            let (_, phi) = pmzv::compute_phi(&frobenius(padic, *max_weight))?;
            Ok(Output::Table { json: phi.to_json(), header: vec!["word", "value"], rows: series_rows(&phi) })
        }
    }
}

fn view_rows(view: &serde_json::Value, keys: &[&str]) -> Vec<Vec<String>> {
    view["terms"]
        .as_array()
        .map(|ts| {
            ts.iter()
                .map(|t| {
                    keys.iter()
                        .map(|k| match &t[*k] {
                            serde_json::Value::String(s) => s.clone(),
                            v => v.to_string(),
                        })
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default()
}

fn pmzv_cmd(cmd: &PmzvCmd) -> Result<Output> {
    match cmd {
        PmzvCmd::Adjoint { padic, max_weight } => {
            let a = pmzv::compute_adjoint_mzv(&frobenius(padic, *max_weight))?;
            let view = pmzv::zeta_ad_view(&a);
            let keys = ["word", "coefficient", "zeta_ad", "abs_prec"];
            Ok(Output::Table { rows: view_rows(&view, &keys), header: keys.to_vec(), json: view })
        }
        PmzvCmd::Phi { padic, max_weight } => {
            let (_, phi) = pmzv::compute_phi(&frobenius(padic, *max_weight))?;
            let view = pmzv::zeta_view(&phi);
            let keys = ["word", "coefficient", "zeta", "abs_prec"];
            Ok(Output::Table { rows: view_rows(&view, &keys), header: keys.to_vec(), json: view })
        }
        PmzvCmd::LiDagger { padic, max_weight, z_degree } => {
            let li = li_dagger(padic, *max_weight, *z_degree)?;
            let view = li.to_json();
            let keys = ["z_degree", "word", "value"];
            Ok(Output::Table { rows: view_rows(&view, &keys), header: keys.to_vec(), json: view })
        }
        PmzvCmd::HarDagger { padic, max_weight, n, word } => {
            let w = parse_plain_word(word, 1)?;
            let li = li_dagger(padic, *max_weight, *n)?;
            let x = pmzv::har_dagger(&li, *n, &w)?;
            Ok(Output::value(vec![("n", n.to_string()), ("word", w.to_text(1))], x))
        }
    }
}

/// `Li†` certified modulo `p^prec`; the solve runs two digits finer to absorb the
/// negative valuations of the `z^q` factor.
fn li_dagger(padic: &PadicArgs, max_weight: u32, z_degree: usize) -> Result<pmzv::ZSeries<cycmzv::scalars::PAdicNum>> {
    let mut cfg = frobenius(padic, max_weight);
    cfg.prec += 2;
    cfg.z_degree = z_degree;
    let (_, phi) = pmzv::compute_phi(&cfg)?;
    let li = pmzv::compute_li_dagger(&cfg, &phi)?;
    Ok(pmzv::ZSeries { coeffs: li.coeffs.iter().map(|f| cap(f, padic.prec)).collect() })
}

fn cap<S: Scalar>(f: &cycmzv::ncseries::NCSeries<S>, m: i64) -> cycmzv::ncseries::NCSeries<S> {
    let mut out = f.empty_like();
    for (w, x) in f.terms() {
        out.set(w.clone(), x.cap_precision(m));
    }
    out
}

fn seeded_prop73(seed: u64, count: u64, max_weight: usize) -> Result<Vec<RelationReport>> {
    use rayon::prelude::*;
    let rows: Vec<(u64, relations::Prop73Report, relations::Depth11Report)> = (seed..seed + count)
        .into_par_iter()
        .map(|s| {
            let f = relations::random_group_like(s, max_weight, s % 2 == 1)?;
            Ok((s, relations::check_prop73(&f)?, relations::check_depth11_equivalence(&f, max_weight)?))
        })
        .collect::<Result<_>>()?;
    let summarize = |name: &str, agree: &dyn Fn(&(u64, relations::Prop73Report, relations::Depth11Report)) -> bool,
                     sides: &dyn Fn(&(u64, relations::Prop73Report, relations::Depth11Report)) -> serde_json::Value| {
        let bad = rows.iter().find(|r| !agree(r));
        RelationReport {
            relation: name.to_string(),
            instance: json!({"seeds": [seed, seed + count], "max_weight": max_weight,
                             "group_like": rows.iter().filter(|r| r.1.group_like.holds()).count()}),
            verdict: if bad.is_none() { cycmzv::scalars::Verdict::Exact } else { cycmzv::scalars::Verdict::Fails },
            witness: bad.map(|r| json!({"seed": r.0, "sides": sides(r)})),
            checked: rows.len(),
        }
    };
    Ok(vec![
        summarize("prop73-agreement", &|r| r.1.agree, &|r| {
            json!([r.1.group_like.to_json_line(), r.1.adjoint_primitive.to_json_line(), r.1.harmonic_shuffle.to_json_line()])
        }),
        summarize("depth11-agreement", &|r| r.2.agree, &|r| {
            json!([r.2.series_side.to_json_line(), r.2.adjoint_side.to_json_line()])
        }),
    ])
}

fn verify(a: &VerifyArgs, seed: u64) -> Result<Vec<Checked>> {
    let padic = PadicArgs { p: a.p.unwrap_or(5), alpha: a.alpha.unwrap_or(1), prec: a.prec.unwrap_or(6) };
    let weight = |d: u32| a.max_weight.unwrap_or(d);
    let roots = a.roots.roots;
    let m = padic.prec;
    Ok(match a.relation {
        Relation::Shuffle => {
            let f = relations::random_group_like(seed, weight(5) as usize, a.perturbed)?;
            vec![Checked::exact(relations::check_shuffle(&f))]
        }
        Relation::QuasiShuffle => {
            let (n_max, depth, w) = (a.n_max.unwrap_or(40), a.depth.unwrap_or(3), weight(6));
            let pairs = relations::stuffle_pairs(roots, w, depth);
            let words: Vec<HarmonicWord> =
                mhs::harmonic_words(roots, w, depth).into_iter().filter(|x| x.depth() > 0).collect();
            let tables: HashMap<HarmonicWord, Vec<CycRat>> =
                words.into_iter().map(|x| { let t = mhs::frak_h_table(n_max as i64, &x, roots); (x, t) }).collect();
            let ns: Vec<u64> = (1..=n_max).collect();
            let mut r = relations::check_quasi_shuffle_seq(&pairs, roots, &roots, &ns, |n, x| {
                tables.get(x).map(|t| t[n as usize - 1].clone()).ok_or_else(|| Error::Bound(format!("no table for {x}")))
            })?;
            r.instance = json!({"n_max": n_max, "depth": depth, "max_weight": w, "N": roots, "pairs": pairs.len()});
            vec![Checked::exact(r)]
        }
        Relation::AdjointQuasiShuffle => {
            let total = weight(6);
            let adj = pmzv::compute_adjoint_mzv(&frobenius(&padic, total + 1))?;
            let mut r = relations::check_adjoint_quasi_shuffle(&adj, total as usize);
            r.instance["p"] = json!(padic.p);
            r.instance["alpha"] = json!(padic.alpha);
            vec![Checked::to(r, m)]
        }
        Relation::LiBridge => {
            let r = relations::check_li_bridge(weight(4), a.n_max.unwrap_or(30) as usize)?;
            vec![Checked::exact(r)]
        }
        Relation::BQuasiShuffle => {
            vec![Checked::exact(relations::check_b_quasi_shuffle(a.l_max.unwrap_or(6), a.n_max.unwrap_or(30) as i64)?)]
        }
        Relation::ReversalReduction => {
            check_padic(&padic)?;
            vec![Checked::to(relations::check_reversal_reduction(padic.p, padic.alpha, weight(4), m)?, m)]
        }
        Relation::ActRt => {
            check_padic(&padic)?;
            let r = relations::check_act_rt(&rt(&padic), weight(5), a.wr_weight.unwrap_or(4), a.n_max.unwrap_or(20))?;
            vec![Checked::to(r, m)]
        }
        Relation::SigmaCoherence => {
            check_padic(&padic)?;
            let ns: Vec<u64> = (1..=a.n_max.unwrap_or(5)).collect();
            let r = relations::check_sigma_coherence(&rt(&padic), weight(4), a.sigma_weight.unwrap_or(5), &ns)?;
            vec![Checked::to(r, m)]
        }
        Relation::Duality => {
            let words = Word::enumerate(1, a.depth.unwrap_or(3), None);
            if a.p.is_some() {
                check_padic(&padic)?;
                let w = weight(5);
                let (_, phi) = pmzv::compute_phi(&frobenius(&padic, w))?;
                let f = relations::adjoint_e1(&pmzv::zeta_series(&phi)?)?;
                vec![Checked::to(relations::check_prime_harmonic_duality(&f, &words, w as usize)?, m - 1)]
            } else {
                let w = weight(6) as usize;
                let f = relations::random_special_automorphism(seed, w)?;
                vec![Checked::exact(relations::check_prime_harmonic_duality(&f, &words, w)?)]
            }
        }
        Relation::Commutant => vec![Checked::exact(relations::check_commutant(weight(5) as usize))],
        Relation::Prop73 | Relation::Depth11 => {
            let mut reps = seeded_prop73(seed, a.count.unwrap_or(50), weight(5) as usize)?;
            let keep = if a.relation == Relation::Prop73 { 0 } else { 1 };
            vec![Checked::exact(reps.swap_remove(keep))]
        }
        Relation::Triple => {
            check_padic(&padic)?;
            let cfg = RtConfig { prec: a.prec.unwrap_or(5), ..rt(&padic) };
            let adj = ihara::sigma_rt(&source(&padic), a.sigma_weight.unwrap_or(5), &cfg)?;
            let h = har_family(&cfg, 30);
            let ns: Vec<u64> = (1..=a.n_max.unwrap_or(padic.p)).collect();
            let triple = relations::quasi_shuffle_triple(&adj, &h, &ns, weight(4))?;
            triple.into_iter().map(|r| Checked::to(r, cfg.prec)).collect()
        }
        Relation::LiDaggerShuffle => {
            let pd = PadicArgs { prec: a.prec.unwrap_or(4), ..padic };
            let w = weight(4);
            let li = li_dagger(&pd, w, a.z_degree.unwrap_or(40))?;
            let sh = relations_li(&li, w as usize)?;
            sh.into_iter().map(|r| Checked::to(r, pd.prec)).collect()
        }
    })
}

fn relations_li(li: &pmzv::ZSeries<cycmzv::scalars::PAdicNum>, w: usize) -> Result<Vec<RelationReport>> {
    let (e0, e1) = (Word(vec![0]), Word(vec![1]));
    Ok(vec![
        pmzv::check_li_dagger_shuffle(li, w)?,
        pmzv::check_har_dagger_convolution(li, &e0, &e1)?,
        pmzv::check_har_dagger_convolution(li, &e1, &e1)?,
    ])
}
