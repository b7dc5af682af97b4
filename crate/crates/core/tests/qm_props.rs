//! Property suite for the homogeneous counting quasimorphisms: exact
//! homogeneity, antisymmetry, conjugacy invariance, the homogenization
//! rate against the analytic boundary cap, and the bounded distance
//! between raw and homogenized values.

use proptest::prelude::*;

use ggqm::qm::{
    defect_estimate, defect_estimate_raw, invert_generator, QuasimorphismSpec,
};
use ggqm::words::{Letter, Presentation, Word};

fn letters(rank: u16, len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=len,
    )
}

fn reduced_word(rank: u16, len: usize) -> impl Strategy<Value = Word> {
    letters(rank, len).prop_map(Word::reduce)
}

fn pattern(rank: u16, max_len: usize) -> impl Strategy<Value = Word> {
    letters(rank, max_len).prop_filter_map("nonempty pattern", |raw| {
        let w = Word::reduce(raw);
        if w.is_empty() {
            None
        } else {
            Some(w)
        }
    })
}

fn f2() -> Presentation {
    Presentation::free(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn homogeneity_is_exact(p in pattern(2, 4), g in reduced_word(2, 10), k in -8i64..=8) {
        let spec = QuasimorphismSpec::brooks(f2(), p, 1.0f64).unwrap();
        let v = spec.eval_base_hom(&g).unwrap();
        let vk = spec.eval_base_hom(&g.power(k)).unwrap();
        prop_assert_eq!(vk, k as f64 * v);
    }

    #[test]
    fn antisymmetry(p in pattern(2, 4), g in reduced_word(2, 12)) {
        let spec = QuasimorphismSpec::brooks(f2(), p, 1.0f64).unwrap();
        let v = spec.eval_base_hom(&g).unwrap();
        let vi = spec.eval_base_hom(&g.invert()).unwrap();
        prop_assert_eq!(vi, -v);
    }

    #[test]
    fn conjugacy_invariance_is_exact(
        p in pattern(2, 4),
        g in reduced_word(2, 10),
        h in reduced_word(2, 8),
    ) {
        let spec = QuasimorphismSpec::brooks(f2(), p, 1.0f64).unwrap();
        let v = spec.eval_base_hom(&g).unwrap();
        let conj = h.concat(&g).concat(&h.invert());
        prop_assert_eq!(spec.eval_base_hom(&conj).unwrap(), v);
    }

    #[test]
    fn symmetrized_value_is_sigma_invariant(
        p in pattern(2, 4),
        g in reduced_word(2, 10),
        flip_a in any::<bool>(),
        flip_b in any::<bool>(),
    ) {
        let spec = QuasimorphismSpec::symmetrized_brooks(p, 1.0f64).unwrap();
        let mut image = g.clone();
        if flip_a {
            image = invert_generator(&image, 1);
        }
        if flip_b {
            image = invert_generator(&image, 2);
        }
        prop_assert_eq!(
            spec.eval_base_hom(&image).unwrap(),
            spec.eval_base_hom(&g).unwrap()
        );
    }

    #[test]
    fn homogenization_rate_with_analytic_cap(
        p in pattern(2, 4),
        g in reduced_word(2, 8),
        n in prop::sample::select(vec![8i64, 16, 32, 64]),
    ) {
        // |raw(g^N) - N * hom(g)| <= boundary_cap(g), verified by direct
        // power computation
        let spec = QuasimorphismSpec::brooks(f2(), p, 1.0f64).unwrap();
        let hom = spec.eval_base_hom(&g).unwrap();
        let raw_n = spec.eval_base_raw(&g.power(n)).unwrap();
        let cap = spec.boundary_cap(&g);
        prop_assert!(
            (raw_n - n as f64 * hom).abs() <= cap,
            "raw {} hom {} cap {}",
            raw_n,
            hom,
            cap
        );
    }

    #[test]
    fn raw_and_homogenized_differ_by_at_most_the_defect_family_bound(
        p in pattern(2, 3),
        g in reduced_word(2, 6),
        n in prop::sample::select(vec![8i64, 16, 32, 64]),
    ) {
        // |raw(g^N)/N - hom(g)| <= D_hat/N with the power pairs of the
        // tested element folded into the declared defect family
        let spec = QuasimorphismSpec::brooks(f2(), p, 1.0f64).unwrap();
        let mut est = defect_estimate_raw(&spec, 400, 10, 9).unwrap();
        let gn = g.power(n);
        for k in 1..=6 {
            est.observe_pair(&spec, &gn.power(k), &gn).unwrap();
        }
        let hom = spec.eval_base_hom(&g).unwrap();
        let raw_n = spec.eval_base_raw(&gn).unwrap();
        prop_assert!(
            (raw_n / n as f64 - hom).abs() <= est.max_observed / n as f64 + 1e-12,
            "raw/N {} hom {} D {}",
            raw_n / n as f64,
            hom,
            est.max_observed
        );
    }
}

#[test]
fn symmetrized_specs_vanish_on_commutator_powers() {
    // every symmetrized single-pattern spec up to length 4 vanishes on
    // [a,b]^k exactly
    let comm = f2().parse("x1x2X1X2").unwrap();
    for pat in ["x1", "x1x2", "x1x1x2x1", "x2X1", "x1x2x2X1"] {
        let spec =
            QuasimorphismSpec::symmetrized_brooks(f2().parse(pat).unwrap(), 1.0f64).unwrap();
        for k in -10..=10 {
            assert_eq!(
                spec.eval_base_hom(&comm.power(k)).unwrap(),
                0.0,
                "pattern {pat}, k = {k}"
            );
        }
    }
}

#[test]
fn defect_estimates_are_monotone_and_reproducible() {
    let spec = QuasimorphismSpec::brooks(f2(), f2().parse("x1x2").unwrap(), 1.0f64).unwrap();
    let small = defect_estimate(&spec, 500, 12, 42).unwrap();
    let large = defect_estimate(&spec, 1000, 12, 42).unwrap();
    assert!(large.max_observed >= small.max_observed);
    let again = defect_estimate(&spec, 1000, 12, 42).unwrap();
    assert_eq!(large.max_observed, again.max_observed);
    // the raw defect dominates pattern-level cancellation effects
    let raw = defect_estimate_raw(&spec, 1000, 12, 42).unwrap();
    assert!(raw.max_observed > 0.0);
}

#[test]
fn raw_minus_homogenized_bounded_by_homogenized_defect_examples() {
    // |phi(g) - hom(g)| <= D for the sampled family, spot checks
    let spec = QuasimorphismSpec::brooks(f2(), f2().parse("x1x2").unwrap(), 1.0f64).unwrap();
    let est = defect_estimate_raw(&spec, 4000, 12, 7).unwrap();
    for s in ["x1x2x1x2", "x2x1X2X1", "x1x1x2X1x2", "X2X1x1x2"] {
        let g = f2().parse(s).unwrap();
        let raw = spec.eval_base_raw(&g).unwrap();
        let hom = spec.eval_base_hom(&g).unwrap();
        assert!(
            (raw - hom).abs() <= est.max_observed,
            "{s}: raw {raw} hom {hom} D {}",
            est.max_observed
        );
    }
}
