//! Cross-cutting checks of the averaged functionals: the integral-mode
//! coboundary scan, homogenization-sequence diagnostics against the
//! observed coboundary, the estimator-level triangle inequality of the
//! pseudo-norm, and a measure check on a deeper composition.

use ggqm::dynamics::{measure_check, sample_homeo, Homeo};
use ggqm::geom::Point2;
use ggqm::qm::{defect_estimate, BrooksPattern, PreMap, QuasimorphismSpec};
use ggqm::sample;
use ggqm::surface::PolygonModel;
use ggqm::words::Presentation;
use ggqm::{gg, Basepoint, Model};

fn torus_scene() -> (Model, Basepoint, QuasimorphismSpec<f64>) {
    let m = Model::torus();
    let z1 = m.canonicalize(Point::of(0.23, 0.18)).unwrap();
    let z2 = m.canonicalize(Point::of(0.85, 0.55)).unwrap();
    let bp = Basepoint::new(&m, vec![z1, z2]).unwrap();
    let f2 = Presentation::free(2);
    let spec = QuasimorphismSpec::new(
        f2,
        vec![BrooksPattern::new(f2.parse("x1x1x2x1").unwrap(), 1.0).unwrap()],
        true,
        PreMap::TorusRelProjection,
    )
    .unwrap();
    (m, bp, spec)
}

use ggqm::Point;

#[test]
fn integral_coboundary_is_bounded_over_sampled_pairs() {
    let (m, bp, spec) = torus_scene();
    let mut rng = sample::rng_for(4, sample::streams::HOMEO, 9000);
    let f = sample_homeo(&m, &mut rng, 3).unwrap();
    let defect = defect_estimate(&spec, 5000, 14, 4).unwrap();
    let report = gg::semibound_scan_integral(
        &m, &bp, &f, &spec, 25, 600, 5, 4, 8, &defect, 4,
    )
    .unwrap();
    assert!(report.pass, "{report:?}");
    // stability of the running max under doubling the trial count
    assert!(report.max_delta_half <= report.max_delta);
    assert!(report.max_delta <= report.bound);
}

#[test]
fn psi_bar_spread_is_controlled_by_the_observed_coboundary() {
    let (m, bp, spec) = torus_scene();
    let mut rng = sample::rng_for(6, sample::streams::HOMEO, 9100);
    let f = sample_homeo(&m, &mut rng, 2).unwrap();
    let defect = defect_estimate(&spec, 5000, 14, 6).unwrap();
    let scan = gg::semibound_scan_integral(
        &m, &bp, &f, &spec, 15, 600, 5, 4, 8, &defect, 6,
    )
    .unwrap();
    let bar = gg::psi_bar(&m, &bp, &f, &spec, 8, 600, 8, 6).unwrap();
    // |Psi(f^k)/k - Psi(f^2k)/2k| <= observed-coboundary/k plus noise
    let d_psi = scan.bound;
    let mc_noise: f64 = bar.rows.iter().map(|r| 3.0 * r.std_error).fold(0.0, f64::max);
    for k in [1usize, 2, 4] {
        let a = bar.rows[k - 1].value;
        let b = bar.rows[2 * k - 1].value;
        assert!(
            (a - b).abs() <= d_psi / k as f64 + 2.0 * mc_noise,
            "k = {k}: |{a} - {b}| > {} / {k} + noise",
            d_psi
        );
    }
}

#[test]
fn norm_estimate_triangle_inequality_on_a_closed_family() {
    // N(fg) <= N(f) + N(g) when the test set is closed under the needed
    // left translations: use S' = S union gS for the composite
    let (m, bp, spec) = torus_scene();
    let mut rng = sample::rng_for(8, sample::streams::HOMEO, 9200);
    let f = sample_homeo(&m, &mut rng, 2).unwrap();
    let g = sample_homeo(&m, &mut rng, 2).unwrap();
    let psi = gg::PsiFunctional::Pointwise { spec };
    let base = gg::sample_norm_set(&m, 10, 8).unwrap();
    let mut closed = base.clone();
    closed.extend(base.iter().map(|h| g.compose(h)));

    let n_fg = gg::norm_estimate(&m, &bp, &psi, &f.compose(&g), &base, 8)
        .unwrap()
        .value;
    let n_f = gg::norm_estimate(&m, &bp, &psi, &f, &closed, 8).unwrap().value;
    let n_g = gg::norm_estimate(&m, &bp, &psi, &g, &closed, 8).unwrap().value;
    assert!(
        n_fg <= n_f + n_g + 1e-12,
        "triangle violated: {n_fg} > {n_f} + {n_g}"
    );
}

#[test]
fn five_factor_composition_preserves_measure() {
    let m = Model::torus();
    let mut rng = sample::rng_for(12, sample::streams::HOMEO, 9300);
    let mut f = Homeo::identity();
    while f.factors().len() < 5 {
        let g = sample_homeo(&m, &mut rng, 1).unwrap();
        f = g.compose(&f);
    }
    let report = measure_check(&m, &f, 4, 25_000, 12).unwrap();
    assert!(report.pass, "sigma dev {}", report.max_sigma_dev);
}

#[test]
fn growth_estimate_scales_for_disk_maps_and_identity() {
    let g2: PolygonModel<f64> = PolygonModel::genus(2).unwrap();
    let z = g2.canonicalize(Point2::of(0.1, -0.2)).unwrap();
    let bp = ggqm::surface::Basepoint::new(&g2, vec![z]).unwrap();
    let f2 = Presentation::free(2);
    let spec = QuasimorphismSpec::brooks(f2, f2.parse("x1").unwrap(), 1.0)
        .unwrap()
        .with_pre_map(ggqm::qm::PreMap::HandlebodyRetract(
            g2.surface_presentation().unwrap(),
        ))
        .unwrap();
    let report = gg::growth_estimate(&g2, &bp, &Homeo::identity(), &spec, 8, 8).unwrap();
    assert_eq!(report.limsup_proxy, 0.0);

    let c = g2.canonicalize(Point2::of(-0.35, 0.1)).unwrap();
    let disk = ggqm::dynamics::DiskMap::new(
        &g2,
        c,
        0.2,
        ggqm::dynamics::PiecewiseLinear::new(vec![(0.0, 2.5), (0.2, 0.0)]).unwrap(),
    )
    .unwrap();
    let f = Homeo::elementary(ggqm::dynamics::ElementaryMap::Disk(disk));
    let report = gg::growth_estimate(&g2, &bp, &f, &spec, 8, 8).unwrap();
    assert!(report.rows.iter().all(|r| r.1 == 0.0));
}

#[test]
fn stratified_sampling_is_unbiased_and_flagged() {
    let (m, bp, spec) = torus_scene();
    let mut rng = sample::rng_for(3, sample::streams::HOMEO, 9400);
    let f = sample_homeo(&m, &mut rng, 2).unwrap();
    let plain = gg::psi_mc(&m, &bp, &f, &spec, 4000, 8, 21).unwrap();
    let strat = gg::psi_mc_sampled(
        &m,
        &bp,
        &f,
        &spec,
        4000,
        8,
        21,
        gg::Sampling::Stratified,
    )
    .unwrap();
    assert!(!plain.stratified);
    assert!(strat.stratified);
    let tol = 4.0 * (plain.std_error + strat.std_error).max(1e-6);
    assert!(
        (plain.mean - strat.mean).abs() <= tol,
        "plain {} vs stratified {} (tol {tol})",
        plain.mean,
        strat.mean
    );
}
