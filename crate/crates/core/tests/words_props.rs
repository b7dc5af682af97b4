//! Property suite for exact word arithmetic. The brute force reducers and
//! scanners below are independent test oracles: they never share code with
//! the library paths they check.

use proptest::prelude::*;

use ggqm::words::{count_subword, CountMode, Letter, Presentation, Word};

/// Oracle: reduce by repeatedly scanning for an adjacent inverse pair and
/// deleting it, until a fixed point. Quadratic and independent of the
/// library's stack reducer.
fn oracle_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < letters.len() {
            if letters[i] == letters[i + 1].inverse() {
                letters.drain(i..=i + 1);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            return letters;
        }
    }
}

/// Oracle: naive O(|w||p|) position scan counting overlapping matches.
fn oracle_count(w: &[Letter], p: &[Letter]) -> usize {
    if p.is_empty() || p.len() > w.len() {
        return 0;
    }
    (0..=w.len() - p.len())
        .filter(|&i| w[i..i + p.len()] == *p)
        .count()
}

fn letters(rank: u16, len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=len,
    )
}

fn reduced_word(rank: u16, len: usize) -> impl Strategy<Value = Word> {
    letters(rank, len).prop_map(Word::reduce)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduce_agrees_with_oracle_and_is_idempotent(raw in letters(3, 40)) {
        let p = Presentation::free(3);
        let w = p.reduce(raw.clone()).unwrap();
        let oracle = oracle_reduce(raw);
        prop_assert_eq!(w.letters(), &oracle[..]);
        let again = Word::reduce(w.letters().iter().cloned());
        prop_assert_eq!(&again, &w);
    }

    #[test]
    fn word_times_inverse_cancels(raw in letters(2, 50)) {
        let w = Word::reduce(raw);
        prop_assert!(w.concat(&w.invert()).is_empty());
        prop_assert!(w.invert().concat(&w).is_empty());
    }

    #[test]
    fn concat_is_associative_with_identity(
        a in reduced_word(2, 16),
        b in reduced_word(2, 16),
        c in reduced_word(2, 16),
    ) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        let e = Word::empty();
        prop_assert_eq!(a.concat(&e), a.clone());
        prop_assert_eq!(e.concat(&a), a);
    }

    #[test]
    fn power_laws(w in reduced_word(2, 10), k in -8i64..=8) {
        prop_assert_eq!(w.power(-k), w.power(k).invert());
        let mut by_hand = Word::empty();
        for _ in 0..k.unsigned_abs() {
            by_hand = by_hand.concat(&w);
        }
        if k >= 0 {
            prop_assert_eq!(w.power(k), by_hand);
        }
    }

    #[test]
    fn cyclic_reduce_reconstructs_and_detects_conjugates(
        core in reduced_word(2, 10),
        conj in reduced_word(2, 8),
    ) {
        let w = conj.concat(&core).concat(&conj.invert());
        let (u, c) = w.cyclic_reduce();
        prop_assert_eq!(&u.concat(&c).concat(&u.invert()), &w);
        // first and last of the core are not inverse
        if c.len() >= 2 {
            let first = c.letters()[0];
            let last = c.letters()[c.len() - 1];
            prop_assert!(first != last.inverse());
        }
        // a conjugate of an already cyclically reduced word has that word
        // (up to rotation) as its core: check length equality
        let (_, base_core) = core.cyclic_reduce();
        let conjugated = conj.concat(&base_core).concat(&conj.invert());
        let (_, c2) = conjugated.cyclic_reduce();
        prop_assert_eq!(c2.len(), base_core.len());
    }

    #[test]
    fn count_matches_oracle(w in reduced_word(2, 40), p in reduced_word(2, 4)) {
        prop_assume!(!p.is_empty());
        let ours = count_subword(&w, &p, CountMode::Linear).unwrap();
        prop_assert_eq!(ours, oracle_count(w.letters(), p.letters()));
    }

    #[test]
    fn count_reversal_symmetry(w in reduced_word(2, 30), p in reduced_word(2, 4)) {
        // occurrences of p in w correspond to occurrences of p^-1 in w^-1
        prop_assume!(!p.is_empty());
        let lhs = count_subword(&w, &p, CountMode::Linear).unwrap();
        let rhs = count_subword(&w.invert(), &p.invert(), CountMode::Linear).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(rhs, oracle_count(w.invert().letters(), p.invert().letters()));
    }

    #[test]
    fn cyclic_count_is_rotation_invariant(w in reduced_word(2, 12), p in reduced_word(2, 3), rot in 0usize..12) {
        prop_assume!(!p.is_empty());
        let (_, core) = w.cyclic_reduce();
        prop_assume!(core.len() >= 2);
        let r = rot % core.len();
        let mut rotated: Vec<Letter> = core.letters()[r..].to_vec();
        rotated.extend_from_slice(&core.letters()[..r]);
        let rotated = Word::reduce(rotated);
        // rotation of a cyclically reduced word can cancel only if it was
        // not cyclically reduced, which cyclic_reduce prevents
        prop_assert_eq!(rotated.len(), core.len());
        let a = count_subword(&core, &p, CountMode::CyclicCore).unwrap();
        let b = count_subword(&rotated, &p, CountMode::CyclicCore).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn retract_is_a_homomorphism(u_raw in letters(4, 14), v_raw in letters(4, 14)) {
        let p = Presentation::surface(2).unwrap();
        let u = Word::reduce(u_raw);
        let v = Word::reduce(v_raw);
        let lhs = p.handlebody_retract(&u.concat(&v)).unwrap();
        let rhs = p
            .handlebody_retract(&u)
            .unwrap()
            .concat(&p.handlebody_retract(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn dehn_kills_products_of_relator_conjugates() {
    use ggqm::sample;
    for genus in [2u16, 3] {
        let p = Presentation::surface(genus).unwrap();
        let relator = p.relator().unwrap();
        for case in 0..40u64 {
            let mut rng = sample::rng_for(100 + genus as u64, 1, case);
            let mut w = Word::empty();
            for _ in 0..5 {
                let conj = sample::reduced_word_up_to(&mut rng, &p, 6);
                let sign = sample::below(&mut rng, 2);
                let r = if sign == 0 {
                    relator.clone()
                } else {
                    relator.invert()
                };
                w = w.concat(&conj).concat(&r).concat(&conj.invert());
            }
            assert!(
                p.dehn_reduce(&w).unwrap().is_empty(),
                "genus {genus} case {case}: trivial word not reduced to empty"
            );
        }
        // generators stay nontrivial
        for g in 1..=p.rank() {
            let w = Word::reduce([Letter::new(g, false)]);
            assert!(!p.is_trivial(&w).unwrap());
        }
    }
}

#[test]
fn dehn_reduced_words_have_no_long_relator_pieces() {
    use ggqm::sample;
    let p = Presentation::surface(2).unwrap();
    let relator = p.relator().unwrap();
    let rel_len = relator.len();
    // all factors of cyclic rotations of R^{+-1} longer than half the
    // relator, collected naively as the oracle
    let mut long_factors: Vec<Vec<Letter>> = Vec::new();
    for base in [relator.clone(), relator.invert()] {
        for r in 0..rel_len {
            let mut rot: Vec<Letter> = base.letters()[r..].to_vec();
            rot.extend_from_slice(&base.letters()[..r]);
            for l in (rel_len / 2 + 1)..=rel_len {
                long_factors.push(rot[..l].to_vec());
            }
        }
    }
    for case in 0..60u64 {
        let mut rng = sample::rng_for(7, 2, case);
        let w = sample::reduced_word_up_to(&mut rng, &p, 30);
        let reduced = p.dehn_reduce(&w).unwrap();
        for f in &long_factors {
            let fw = Word::reduce(f.iter().cloned());
            if fw.len() != f.len() {
                continue; // factor itself not reduced (cannot occur in a reduced word)
            }
            let hits = count_subword(&reduced, &fw, CountMode::Linear).unwrap();
            assert_eq!(hits, 0, "case {case}: long relator piece survived");
        }
    }
}

#[test]
fn serialization_grammar_examples() {
    let f3 = Presentation::free(3);
    assert_eq!(f3.format(&f3.parse("x1X2x3").unwrap()), "x1X2x3");
    let s2 = Presentation::surface(2).unwrap();
    let r = s2.relator().unwrap();
    assert_eq!(s2.format(&r), "a1b1A1B1a2b2A2B2");
    assert_eq!(s2.parse(&s2.format(&r)).unwrap(), r);
}
