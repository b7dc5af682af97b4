//! The geometric core is generic over the float scalar; exercise the f32
//! instantiation end to end at smoke level (f64 is the working precision
//! everywhere else).

use ggqm::cocycle::{gamma_n1, GammaValue};
use ggqm::dynamics::{point_push, CorePath, ElementaryMap, Homeo};
use ggqm::geom::Point2;
use ggqm::qm::QuasimorphismSpec;
use ggqm::surface::{Basepoint, PolygonModel};
use ggqm::words::Presentation;

#[test]
fn f32_torus_point_push_winds_once() {
    let m: PolygonModel<f32> = PolygonModel::torus();
    let z = m.canonicalize(Point2::of(0.25, 0.5)).unwrap();
    let push = point_push(
        &m,
        CorePath::TorusLift(vec![z.coords, z.coords + Point2::of(1.0, 0.0)]),
        0.125,
        1,
    )
    .unwrap();
    let f = Homeo::elementary(ElementaryMap::Twist(push));
    assert!(f.apply(&m, &z).unwrap().same_coords(&z));
    let bp = Basepoint::new(&m, vec![z]).unwrap();
    match gamma_n1(&m, &f, &z, &bp, 8).unwrap() {
        GammaValue::TorusClass(a, b) => assert_eq!((a, b), (1, 0)),
        _ => unreachable!(),
    }
}

#[test]
fn f32_quasimorphism_values_match_f64_on_quarter_integers() {
    let f2 = Presentation::free(2);
    let g = f2.parse("x1x1x2x1x2x2").unwrap();
    let s32: QuasimorphismSpec<f32> =
        QuasimorphismSpec::symmetrized_brooks(f2.parse("x1x1x2x1").unwrap(), 1.0f32).unwrap();
    let s64: QuasimorphismSpec<f64> =
        QuasimorphismSpec::symmetrized_brooks(f2.parse("x1x1x2x1").unwrap(), 1.0f64).unwrap();
    assert_eq!(s32.eval_base_hom(&g).unwrap(), 0.25f32);
    assert_eq!(s64.eval_base_hom(&g).unwrap(), 0.25f64);
}
