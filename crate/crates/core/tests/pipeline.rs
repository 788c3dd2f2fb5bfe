//! End to end: prime weighted harmonic sums to the Frobenius associator and Li dagger.

use cycmzv::pmzv::{check_li_dagger_shuffle, compute_li_dagger, compute_phi, zeta_series, FrobeniusConfig};
use cycmzv::relations::{adjoint_e1, check_adjoint_quasi_shuffle, check_prime_harmonic_duality, check_shuffle, special_automorphism_defect};
use cycmzv::scalars::{Scalar, ZeroCheck};
use cycmzv::words::Word;

#[test]
fn frobenius_at_seven() {
    let cfg = FrobeniusConfig::new(7, 1, 5, 5);
    let (a, phi) = compute_phi(&cfg).unwrap();
    assert!(check_shuffle(&phi).verdict.holds_to(5));
    assert!(check_adjoint_quasi_shuffle(&a, 4).verdict.holds_to(5));
    let back = adjoint_e1(&phi).unwrap();
    for (w, x) in a.series.terms().iter().filter(|(w, _)| w.weight() <= 5) {
        let d = x.sub(&back.get(w));
        assert!(d.is_exact_zero() || d.valuation().is_some_and(|v| v >= 5), "{}", w.to_text(1));
    }
}

#[test]
fn duality_for_the_zeta_series() {
    let (_, phi) = compute_phi(&FrobeniusConfig::new(5, 1, 5, 5)).unwrap();
    let words = Word::enumerate(1, 2, None);
    let a = adjoint_e1(&zeta_series(&phi).unwrap()).unwrap();
    let defect = special_automorphism_defect(&a).unwrap();
    assert!(defect.terms().iter().all(|(w, x)| w.weight() > 5 || x.zero_check() != ZeroCheck::NonZero));
    let r = check_prime_harmonic_duality(&a, &words, 5).unwrap();
    assert!(r.verdict.holds_to(5), "{}", r.to_json_line());
    // Phi itself is not special: the relation fails from weight 4 on
    let raw = adjoint_e1(&phi).unwrap();
    assert!(!check_prime_harmonic_duality(&raw, &words, 5).unwrap().holds());
}

#[test]
fn li_dagger_at_seven() {
    let mut cfg = FrobeniusConfig::new(7, 1, 3, 5);
    cfg.z_degree = 20;
    let (_, phi) = compute_phi(&cfg).unwrap();
    let li = compute_li_dagger(&cfg, &phi).unwrap();
    let r = check_li_dagger_shuffle(&li, 3).unwrap();
    assert!(r.verdict.holds_to(3), "{}", r.to_json_line());
}
