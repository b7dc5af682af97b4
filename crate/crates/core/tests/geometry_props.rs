//! Property suite for the polygon models: canonicalization, folding walks,
//! trace words, and their oracles.

use proptest::prelude::*;

use ggqm::geom::Point2;
use ggqm::surface::{PolygonModel, TraceWord};
use ggqm::words::Word;

fn torus() -> PolygonModel<f64> {
    PolygonModel::torus()
}

fn small_disp() -> impl Strategy<Value = Point2<f64>> {
    (-0.9f64..0.9, -0.9f64..0.9).prop_map(|(x, y)| Point2::of(x, y))
}

fn interior_point() -> impl Strategy<Value = Point2<f64>> {
    (0.05f64..0.95, 0.05f64..0.95).prop_map(|(x, y)| Point2::of(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonicalize_is_idempotent(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let m = torus();
        if let Ok(p) = m.canonicalize(Point2::of(x, y)) {
            let q = m.canonicalize(p.coords).unwrap();
            prop_assert_eq!(q.coords, p.coords);
            prop_assert_eq!(q.lift_offset, (0, 0));
        }
    }

    #[test]
    fn fold_walk_preserves_length(start in interior_point(), disps in prop::collection::vec(small_disp(), 1..5)) {
        // side pairings are isometries: the traced length equals the sum of
        // the displacement lengths
        let m = torus();
        if let Ok((trace, _)) = m.trace_polyline(start, &disps) {
            let want: f64 = disps.iter().map(|d| d.norm()).sum();
            prop_assert!((trace.length() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn torus_class_matches_lift_displacement_oracle(
        start in interior_point(),
        disps in prop::collection::vec(small_disp(), 1..6),
    ) {
        // oracle: the crossing class must equal the integer difference
        // between the plane lift endpoint and its representative
        let m = torus();
        if let Ok((trace, end_rep)) = m.trace_polyline(start, &disps) {
            let lift_end = disps.iter().fold(start, |acc, d| acc + *d);
            let off = lift_end - end_rep;
            let ox = off.x.round();
            let oy = off.y.round();
            prop_assert!((off.x - ox).abs() < 1e-9 && (off.y - oy).abs() < 1e-9);
            match m.trace_to_word(&trace).unwrap() {
                TraceWord::Torus { class, .. } => {
                    prop_assert_eq!(class, (ox as i64, oy as i64));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn trace_concatenation_multiplies_words_right_to_left(
        start in interior_point(),
        d1 in prop::collection::vec(small_disp(), 1..4),
        d2 in prop::collection::vec(small_disp(), 1..4),
    ) {
        let m = torus();
        let Ok((mut full, mid)) = m.trace_polyline(start, &d1) else { return Ok(()) };
        let Ok((second, _)) = m.trace_polyline(mid, &d2) else { return Ok(()) };
        let first = full.clone();
        full.append(second.clone());
        let word = |t| match m.trace_to_word(t).unwrap() {
            TraceWord::Torus { word, .. } => word,
            _ => unreachable!(),
        };
        // reading is right-to-left: word(run A then B) = word(B) * word(A)
        prop_assert_eq!(word(&full), word(&second).concat(&word(&first)));
    }

    #[test]
    fn trace_reversal_inverts_word(
        start in interior_point(),
        disps in prop::collection::vec(small_disp(), 1..5),
    ) {
        let m = torus();
        let Ok((trace, _)) = m.trace_polyline(start, &disps) else { return Ok(()) };
        let rev = trace.reverse(&m);
        let word = |t| match m.trace_to_word(t).unwrap() {
            TraceWord::Torus { word, .. } => word,
            _ => unreachable!(),
        };
        prop_assert_eq!(word(&rev), word(&trace).invert());
    }
}

#[test]
fn genus_trace_word_stable_under_small_perturbation() {
    let m: PolygonModel<f64> = PolygonModel::genus(2).unwrap();
    // an out-and-back walk folds through a side pair and cancels exactly
    let start = Point2::of(0.45, 0.12);
    let out = Point2::of(0.55, 0.1);
    let (closed, end) = m
        .trace_polyline(start, &[out, Point2::of(-out.x, -out.y)])
        .unwrap();
    assert!(end.dist(start) < 1e-9);
    assert_eq!(closed.crossing_count(), 2);
    match m.trace_to_word(&closed).unwrap() {
        TraceWord::Surface(w) => assert!(w.is_empty()),
        _ => unreachable!(),
    }

    // an open walk through two sides has a 2-letter crossing word that is
    // unchanged by perturbations below the clearance scale
    let base: Vec<Point2<f64>> = vec![Point2::of(0.7, 0.12), Point2::of(-0.1, 0.75)];
    let (trace, _) = m.trace_polyline(start, &base).unwrap();
    let word0 = match m.trace_to_word(&trace).unwrap() {
        TraceWord::Surface(w) => w,
        _ => unreachable!(),
    };
    assert!(!word0.is_empty());
    for eps in [1e-6, -2e-6, 5e-7] {
        let perturbed: Vec<Point2<f64>> = base
            .iter()
            .enumerate()
            .map(|(i, d)| *d + Point2::of(eps * (i as f64 + 1.0), -eps))
            .collect();
        let start2 = start + Point2::of(-eps, eps * 0.5);
        let (t2, _) = m.trace_polyline(start2, &perturbed).unwrap();
        let w2 = match m.trace_to_word(&t2).unwrap() {
            TraceWord::Surface(w) => w,
            _ => unreachable!(),
        };
        assert_eq!(w2, word0, "perturbation {eps} changed the word");
    }
}

#[test]
fn connectors_never_cross_and_close_loops_read_trivially() {
    let m: PolygonModel<f64> = PolygonModel::genus(3).unwrap();
    let xs = [
        Point2::of(0.3, 0.2),
        Point2::of(-0.4, 0.15),
        Point2::of(0.1, -0.45),
        Point2::of(0.5, 0.0),
    ];
    let pts: Vec<_> = xs.iter().map(|&p| m.canonicalize(p).unwrap()).collect();
    let mut loop_trace = ggqm::surface::PathTrace::new();
    for i in 0..pts.len() {
        let t = m.connector(&pts[i], &pts[(i + 1) % pts.len()]).unwrap();
        assert_eq!(t.crossing_count(), 0);
        loop_trace.append(t);
    }
    match m.trace_to_word(&loop_trace).unwrap() {
        TraceWord::Surface(w) => assert_eq!(w, Word::empty()),
        _ => unreachable!(),
    }
}
