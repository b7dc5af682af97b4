//! The headline functionals: Monte Carlo averaging of quasimorphism values
//! over the braid cocycle, pointwise evaluation at a pinned basepoint,
//! semi-boundedness scans, pseudo-norm estimation, growth diagnostics, and
//! distortion certificates.
//!
//! Every sup-type quantity (defect, `B_f`, pseudo-norms, `d_0`) is reported
//! as a monotone lower-bound estimator over a declared finite sample
//! family, and inequalities are asserted in the direction where such
//! estimators are sound. All randomness is counter-based per sample index,
//! so reports are byte-identical for any worker count; Monte Carlo means
//! are reduced in index order.

use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{gamma, GammaValue};
use crate::dynamics::{sample_homeo, Homeo};
use crate::error::Error;
use crate::qm::{DefectEstimate, QuasimorphismSpec};
use crate::sample;
use crate::scalar::Real;
use crate::surface::{Basepoint, PolygonModel, SurfacePoint};
use crate::Result;

/// Evaluate the quasimorphism on a gamma value. Torus `n = 1` classes are
/// central in `pi_1(T) = Z^2`, so only the zero quasimorphism is
/// admissible there; anything else is an input error.
pub fn eval_gamma<R: Real>(spec: &QuasimorphismSpec<R>, value: &GammaValue) -> Result<R> {
    match value {
        GammaValue::TorusClass(..) => {
            if spec.terms().is_empty() {
                Ok(R::zero())
            } else {
                Err(Error::input(
                    "no nonzero centre-vanishing quasimorphism exists on the torus with n = 1",
                ))
            }
        }
        GammaValue::SurfaceWord(w) => spec.eval_word_hom(w),
        GammaValue::Braid(tb) => spec.eval_braid_hom(tb),
    }
}

/// How configuration points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Uniform,
    /// Jittered-grid stratification of the first configuration component
    /// (variance reduction; the estimate stays unbiased and deterministic
    /// per sample index).
    Stratified,
}

fn sample_config<R: Real>(
    model: &PolygonModel<R>,
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<SurfacePoint<R>>> {
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(model.sample_point(rng)?);
    }
    Ok(pts)
}

/// First-component draw for stratified sampling: jitter inside the cell of
/// a `strata x strata` grid over the model's bounding box, falling back to
/// a plain draw when the cell misses the polygon.
fn stratified_point<R: Real>(
    model: &PolygonModel<R>,
    index: u64,
    strata: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<SurfacePoint<R>> {
    let cell = index % (strata * strata);
    let (cx, cy) = (cell % strata, cell / strata);
    let (lo, hi) = if model.is_torus() {
        (crate::geom::pt(R::zero(), R::zero()), crate::geom::pt(R::one(), R::one()))
    } else {
        (
            crate::geom::Point2::of(-1.0, -1.0),
            crate::geom::Point2::of(1.0, 1.0),
        )
    };
    let w = R::of_usize(strata as usize);
    for _ in 0..32 {
        let fx = (R::of_usize(cx as usize) + sample::unit(rng)) / w;
        let fy = (R::of_usize(cy as usize) + sample::unit(rng)) / w;
        let p = crate::geom::pt(lo.x + (hi.x - lo.x) * fx, lo.y + (hi.y - lo.y) * fy);
        match model.canonicalize(p) {
            Ok(sp) => return Ok(sp),
            Err(e) if e.is_resample() => continue,
            Err(_) => break, // cell outside the polygon
        }
    }
    model.sample_point(rng)
}

/// Monte Carlo estimate of the integral of `phi(gamma(f, x))` over the
/// configuration space with the product of the normalized area measure.
#[derive(Clone, Debug, Serialize)]
pub struct PsiEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub rejected: u64,
    pub seed: u64,
    pub stratified: bool,
    /// Set when the degenerate-sample rate exceeded 1% (suggests geometry
    /// violating the measure-zero assumption).
    pub high_rejection: bool,
}

const MAX_RESAMPLE: u32 = 1000;

/// One gamma evaluation with resampling of degenerate configurations on
/// the per-index stream; returns the value and the rejection count.
#[allow(clippy::too_many_arguments)]
fn sampled_value<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    resolution: usize,
    sampling: Sampling,
    index: u64,
    strata: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(R, u64)> {
    let mut rejected = 0u64;
    for _ in 0..MAX_RESAMPLE {
        let mut draw = || -> Result<Vec<SurfacePoint<R>>> {
            match sampling {
                Sampling::Uniform => sample_config(model, bp.n(), rng),
                Sampling::Stratified => {
                    let mut pts = vec![stratified_point(model, index, strata, rng)?];
                    for _ in 1..bp.n() {
                        pts.push(model.sample_point(rng)?);
                    }
                    Ok(pts)
                }
            }
        };
        let x = match draw() {
            Ok(x) => x,
            Err(e) if e.is_resample() => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        match gamma(model, f, &x, bp, resolution).and_then(|v| eval_gamma(spec, &v)) {
            Ok(v) => return Ok((v, rejected)),
            Err(e) if e.is_resample() => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::geometry(
        "sampling kept hitting degenerate configurations",
    ))
}

/// Monte Carlo `Psi(f)`: mean of `phi(gamma(f, x))` over uniform samples.
/// Deterministic for a fixed seed and sample count, for any worker count.
pub fn psi_mc<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    samples: u64,
    resolution: usize,
    seed: u64,
) -> Result<PsiEstimate> {
    psi_mc_sampled(
        model,
        bp,
        f,
        spec,
        samples,
        resolution,
        seed,
        Sampling::Uniform,
    )
}

/// `psi_mc` with an explicit sampling strategy.
#[allow(clippy::too_many_arguments)]
pub fn psi_mc_sampled<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    samples: u64,
    resolution: usize,
    seed: u64,
    sampling: Sampling,
) -> Result<PsiEstimate> {
    psi_mc_stream_sampled(
        model,
        bp,
        f,
        spec,
        samples,
        resolution,
        seed,
        sample::streams::PSI,
        sampling,
    )
}

#[allow(clippy::too_many_arguments)]
fn psi_mc_stream<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    samples: u64,
    resolution: usize,
    seed: u64,
    stream: u64,
) -> Result<PsiEstimate> {
    psi_mc_stream_sampled(
        model, bp, f, spec, samples, resolution, seed, stream, Sampling::Uniform,
    )
}

#[allow(clippy::too_many_arguments)]
fn psi_mc_stream_sampled<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    samples: u64,
    resolution: usize,
    seed: u64,
    stream: u64,
    sampling: Sampling,
) -> Result<PsiEstimate> {
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let strata = (samples as f64).sqrt().floor().max(1.0) as u64;
    let results: Vec<Result<(R, u64)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample::rng_for(seed, stream, i);
            sampled_value(model, bp, f, spec, resolution, sampling, i, strata, &mut rng)
        })
        .collect();
    let mut values = Vec::with_capacity(samples as usize);
    let mut rejected = 0u64;
    for r in results {
        let (v, rej) = r?;
        values.push(v.as_f64());
        rejected += rej;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_error = (var / n).sqrt();
    Ok(PsiEstimate {
        mean,
        std_error,
        samples,
        rejected,
        seed,
        stratified: sampling == Sampling::Stratified,
        high_rejection: (rejected as f64) > 0.01 * n,
    })
}

/// One row of the homogenization sequence `Psi(f^k) / k`.
#[derive(Clone, Debug, Serialize)]
pub struct PsiBarRow {
    pub k: u32,
    pub value: f64,
    pub std_error: f64,
    pub rejected: u64,
}

/// The sequence `Psi(f^k)/k` with Cauchy-style spread diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct PsiBarReport {
    pub rows: Vec<PsiBarRow>,
    /// max - min over the second half of the sequence.
    pub tail_spread: f64,
    pub samples_per_k: u64,
    pub seed: u64,
}

#[allow(clippy::too_many_arguments)]
pub fn psi_bar<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    k_max: u32,
    samples: u64,
    resolution: usize,
    seed: u64,
) -> Result<PsiBarReport> {
    if k_max < 1 {
        return Err(Error::input("k_max must be >= 1"));
    }
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let fk = f.power(k as i64);
        let est = psi_mc_stream(
            model,
            bp,
            &fk,
            spec,
            samples,
            resolution,
            seed,
            sample::streams::PSI_BAR + k as u64,
        )?;
        rows.push(PsiBarRow {
            k,
            value: est.mean / k as f64,
            std_error: est.std_error / k as f64,
            rejected: est.rejected,
        });
    }
    let tail: Vec<f64> = rows[rows.len() / 2..].iter().map(|r| r.value).collect();
    let tail_spread = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(PsiBarReport {
        rows,
        tail_spread,
        samples_per_k: samples,
        seed,
    })
}

/// Pointwise `Psi_z(f) = phi(gamma(f, z))`, exact word arithmetic followed
/// by the exact homogenized evaluation. Degenerate traces are hard errors
/// here: the basepoint is pinned by the caller, not resampled.
pub fn psi_z<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    resolution: usize,
) -> Result<R> {
    let x: Vec<SurfacePoint<R>> = bp.points().to_vec();
    let v = gamma(model, f, &x, bp, resolution)?;
    eval_gamma(spec, &v)
}

/// Report of a semi-boundedness scan: `max_g |dPsi_z(f, g)| <= 2 B_f + D`.
#[derive(Clone, Debug, Serialize)]
pub struct SemiBoundReport {
    pub f_desc: String,
    pub max_delta: f64,
    /// Running max after half the trials (stability diagnostic).
    pub max_delta_half: f64,
    pub bound: f64,
    pub b_hat: f64,
    pub defect_bound: f64,
    /// Informational analytic cap, when the caller supplied one.
    pub defect_analytic_cap: Option<f64>,
    pub g_samples: u64,
    pub degenerate: u64,
    pub grid: usize,
    pub pass: bool,
}

/// Fold the coboundary of an explicit gamma-value pair into a defect
/// estimate (such pairs are genuine members of the defect family).
fn observe_gamma_pair<R: Real>(
    est: &mut DefectEstimate<R>,
    spec: &QuasimorphismSpec<R>,
    a: &GammaValue,
    b: &GammaValue,
) -> Result<()> {
    let ab = a.mul(b)?;
    let d = (eval_gamma(spec, b)? - eval_gamma(spec, &ab)? + eval_gamma(spec, a)?).abs();
    if d > est.max_observed {
        est.max_observed = d;
    }
    est.trials += 1;
    Ok(())
}

/// Scan `|dPsi_z(f, g)| = |Psi_z(g) - Psi_z(fg) + Psi_z(f)|` over sampled
/// `g` from the map DSL and compare against `2 * B_hat + D_hat`. `B_hat`
/// is the maximum of `|phi(gamma(f, x))|` over a grid `grid_refine` times
/// denser than `grid`, extended by the basepoint and the sampled `g(z)`
/// orbit; `D_hat` additionally folds in the scan's own cocycle pairs.
#[allow(clippy::too_many_arguments)]
pub fn semibound_scan<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    trials: u64,
    grid: usize,
    grid_refine: usize,
    resolution: usize,
    defect: &DefectEstimate<R>,
    seed: u64,
) -> Result<SemiBoundReport> {
    if trials < 1 {
        return Err(Error::input("trials must be >= 1"));
    }
    let mut defect = defect.clone();
    let z: Vec<SurfacePoint<R>> = bp.points().to_vec();

    // B_hat over the refined grid (the first basepoint component sweeps the
    // grid; for n = 2 the second strand stays at the basepoint)
    let mut b_hat = R::zero();
    let dense = model.grid_points(grid * grid_refine.max(1));
    let mut grid_used = 0usize;
    for p in &dense {
        let mut x = z.clone();
        x[0] = *p;
        if bp.n() == 2 && p.same_coords(&x[1]) {
            continue;
        }
        match gamma(model, f, &x, bp, resolution).and_then(|v| eval_gamma(spec, &v)) {
            Ok(v) => {
                b_hat = b_hat.max(v.abs());
                grid_used += 1;
            }
            Err(e) if e.is_resample() => continue,
            Err(e) => return Err(e),
        }
    }
    if grid_used == 0 {
        return Err(Error::geometry("no admissible grid points for B_f"));
    }
    let gamma_f_z = gamma(model, f, &z, bp, resolution)?;
    let psi_f_z = eval_gamma(spec, &gamma_f_z)?;
    b_hat = b_hat.max(psi_f_z.abs());

    let mut max_delta = R::zero();
    let mut max_delta_half = R::zero();
    let mut degenerate = 0u64;
    for i in 0..trials {
        let mut rng = sample::rng_for(seed, sample::streams::SEMIBOUND, i);
        let g = sample_homeo(model, &mut rng, 3)?;
        let outcome = (|| -> Result<R> {
            let gz: Vec<SurfacePoint<R>> = z
                .iter()
                .map(|p| g.apply(model, p))
                .collect::<Result<_>>()?;
            let gamma_g = gamma(model, &g, &z, bp, resolution)?;
            let gamma_f_gz = gamma(model, f, &gz, bp, resolution)?;
            let fg = f.compose(&g);
            let gamma_fg = gamma(model, &fg, &z, bp, resolution)?;
            // grow the declared estimator families with this trial
            b_hat = b_hat.max(eval_gamma(spec, &gamma_f_gz)?.abs());
            observe_gamma_pair(&mut defect, spec, &gamma_f_gz, &gamma_g)?;
            let delta = eval_gamma(spec, &gamma_g)? - eval_gamma(spec, &gamma_fg)?
                + eval_gamma(spec, &gamma_f_z)?;
            Ok(delta.abs())
        })();
        match outcome {
            Ok(d) => {
                max_delta = max_delta.max(d);
                if i < trials / 2 {
                    max_delta_half = max_delta_half.max(d);
                }
            }
            Err(e) if e.is_resample() => degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    let bound = R::of(2.0) * b_hat + defect.max_observed;
    Ok(SemiBoundReport {
        f_desc: f.describe(),
        max_delta: max_delta.as_f64(),
        max_delta_half: max_delta_half.as_f64(),
        bound: bound.as_f64(),
        b_hat: b_hat.as_f64(),
        defect_bound: defect.max_observed.as_f64(),
        defect_analytic_cap: defect.analytic_cap.map(|c| c.as_f64()),
        g_samples: trials,
        degenerate,
        grid: grid * grid_refine.max(1),
        pass: max_delta <= bound,
    })
}

/// Integral-mode coboundary scan: `|Psi(g) - Psi(fg) + Psi(f)|` with the
/// averaged functional estimated by Monte Carlo per map. The bound has the
/// same `2 B_hat + D_hat` shape as the pointwise scan (the pointwise
/// argument holds under the integral sign), plus a cushion of three
/// combined standard errors for the Monte Carlo noise.
#[allow(clippy::too_many_arguments)]
pub fn semibound_scan_integral<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    trials: u64,
    samples: u64,
    grid: usize,
    grid_refine: usize,
    resolution: usize,
    defect: &DefectEstimate<R>,
    seed: u64,
) -> Result<SemiBoundReport> {
    if trials < 1 {
        return Err(Error::input("trials must be >= 1"));
    }
    let z: Vec<SurfacePoint<R>> = bp.points().to_vec();
    let mut b_hat = R::zero();
    for p in model.grid_points(grid * grid_refine.max(1)) {
        let mut x = z.clone();
        x[0] = p;
        if bp.n() == 2 && p.same_coords(&x[1]) {
            continue;
        }
        match gamma(model, f, &x, bp, resolution).and_then(|v| eval_gamma(spec, &v)) {
            Ok(v) => b_hat = b_hat.max(v.abs()),
            Err(e) if e.is_resample() => continue,
            Err(e) => return Err(e),
        }
    }
    let psi_f = psi_mc_stream(model, bp, f, spec, samples, resolution, seed, sample::streams::PSI)?;
    let mut max_delta = 0.0f64;
    let mut max_delta_half = 0.0f64;
    let mut cushion = 0.0f64;
    let mut degenerate = 0u64;
    for i in 0..trials {
        let mut rng = sample::rng_for(seed, sample::streams::SEMIBOUND, i);
        let g = sample_homeo(model, &mut rng, 3)?;
        let fg = f.compose(&g);
        let outcome = (|| -> Result<(f64, f64)> {
            let psi_g =
                psi_mc_stream(model, bp, &g, spec, samples, resolution, seed, sample::streams::PSI)?;
            let psi_fg = psi_mc_stream(
                model,
                bp,
                &fg,
                spec,
                samples,
                resolution,
                seed,
                sample::streams::PSI,
            )?;
            let delta = (psi_g.mean - psi_fg.mean + psi_f.mean).abs();
            let se = psi_g.std_error + psi_fg.std_error + psi_f.std_error;
            Ok((delta, se))
        })();
        match outcome {
            Ok((delta, se)) => {
                max_delta = max_delta.max(delta);
                if i < trials / 2 {
                    max_delta_half = max_delta_half.max(delta);
                }
                cushion = cushion.max(3.0 * se);
            }
            Err(e) if e.is_resample() => degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    let bound = 2.0 * b_hat.as_f64() + defect.max_observed.as_f64() + cushion;
    Ok(SemiBoundReport {
        f_desc: f.describe(),
        max_delta,
        max_delta_half,
        bound,
        b_hat: b_hat.as_f64(),
        defect_bound: defect.max_observed.as_f64(),
        defect_analytic_cap: defect.analytic_cap.map(|c| c.as_f64()),
        g_samples: trials,
        degenerate,
        grid: grid * grid_refine.max(1),
        pass: max_delta <= bound,
    })
}

/// How the functional of a pseudo-norm estimate is evaluated.
#[derive(Clone, Debug)]
pub enum PsiFunctional<R> {
    /// `Psi_z` at the scene basepoint.
    Pointwise { spec: QuasimorphismSpec<R> },
    /// Monte Carlo `Psi` with the given sampling parameters.
    MonteCarlo {
        spec: QuasimorphismSpec<R>,
        samples: u64,
        seed: u64,
    },
}

impl<R: Real> PsiFunctional<R> {
    pub fn eval(
        &self,
        model: &PolygonModel<R>,
        bp: &Basepoint<R>,
        f: &Homeo<R>,
        resolution: usize,
    ) -> Result<f64> {
        match self {
            PsiFunctional::Pointwise { spec } => {
                Ok(psi_z(model, bp, f, spec, resolution)?.as_f64())
            }
            PsiFunctional::MonteCarlo {
                spec,
                samples,
                seed,
            } => Ok(psi_mc(model, bp, f, spec, *samples, resolution, *seed)?.mean),
        }
    }
}

/// Lower bound for the pseudo-norm `|f|_psi = sup_g |psi(g) - psi(fg)|`
/// over a declared finite set of test maps. Monotone in the set.
#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub witness: Option<String>,
    pub set_size: usize,
    pub degenerate: u64,
}

pub fn norm_estimate<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    psi: &PsiFunctional<R>,
    f: &Homeo<R>,
    set: &[Homeo<R>],
    resolution: usize,
) -> Result<NormEstimate> {
    let mut value = 0.0f64;
    let mut witness = None;
    let mut degenerate = 0u64;
    for g in set {
        let fg = f.compose(g);
        match (
            psi.eval(model, bp, g, resolution),
            psi.eval(model, bp, &fg, resolution),
        ) {
            (Ok(a), Ok(b)) => {
                let d = (a - b).abs();
                if d > value {
                    value = d;
                    witness = Some(g.describe());
                }
            }
            (Err(e), _) | (_, Err(e)) if e.is_resample() => degenerate += 1,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(NormEstimate {
        value,
        witness,
        set_size: set.len(),
        degenerate,
    })
}

/// Draw a documented family of test maps for norm estimation (the identity
/// plus `count` DSL samples).
pub fn sample_norm_set<R: Real>(
    model: &PolygonModel<R>,
    count: usize,
    seed: u64,
) -> Result<Vec<Homeo<R>>> {
    let mut out = Vec::with_capacity(count + 1);
    out.push(Homeo::identity());
    for i in 0..count {
        let mut rng = sample::rng_for(seed, sample::streams::NORM_SET, i as u64);
        out.push(sample_homeo(model, &mut rng, 3)?);
    }
    Ok(out)
}

/// Growth of `|Psi_z(f^k)| / k`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<(u32, f64)>,
    /// max over the tail half (limsup proxy).
    pub limsup_proxy: f64,
}

pub fn growth_estimate<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    k_max: u32,
    resolution: usize,
) -> Result<GrowthReport> {
    if k_max < 2 {
        return Err(Error::input("k_max must be >= 2"));
    }
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let v = psi_z(model, bp, &f.power(k as i64), spec, resolution)?;
        rows.push((k, v.abs().as_f64() / k as f64));
    }
    let limsup_proxy = rows[rows.len() / 2..]
        .iter()
        .map(|r| r.1)
        .fold(0.0f64, f64::max);
    Ok(GrowthReport { rows, limsup_proxy })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Undistorted,
    Inconclusive,
}

/// Certificate for the fixed-point distortion criterion: `f` is
/// undistorted when the basepoint is an exact fixed point and
/// `phi(gamma(f, z)) > 0`.
#[derive(Clone, Debug, Serialize)]
pub struct DistortionCertificate {
    pub f_desc: String,
    pub fixed_point: bool,
    pub psi_z: f64,
    pub gamma: String,
    pub verdict: Verdict,
    pub reason: String,
}

pub fn certify_undistorted<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    resolution: usize,
) -> Result<DistortionCertificate> {
    let mut fixed = true;
    for z in bp.points() {
        let fz = f.apply(model, z)?;
        if !fz.same_coords(z) {
            fixed = false;
        }
    }
    let (value, gamma_desc) = if fixed {
        let x: Vec<SurfacePoint<R>> = bp.points().to_vec();
        let v = gamma(model, f, &x, bp, resolution)?;
        let desc = describe_gamma(model, &v);
        (eval_gamma(spec, &v)?.as_f64(), desc)
    } else {
        (0.0, String::new())
    };
    let (verdict, reason) = if !fixed {
        (
            Verdict::Inconclusive,
            "basepoint is not an exact fixed point".to_string(),
        )
    } else if value > 0.0 {
        (
            Verdict::Undistorted,
            "exact fixed point with positive quasimorphism value".to_string(),
        )
    } else {
        (
            Verdict::Inconclusive,
            "quasimorphism value is not positive".to_string(),
        )
    };
    Ok(DistortionCertificate {
        f_desc: f.describe(),
        fixed_point: fixed,
        psi_z: value,
        gamma: gamma_desc,
        verdict,
        reason,
    })
}

/// Serialize a gamma value in the word grammar.
pub fn describe_gamma<R: Real>(model: &PolygonModel<R>, v: &GammaValue) -> String {
    match v {
        GammaValue::TorusClass(a, b) => format!("({a},{b})"),
        GammaValue::SurfaceWord(w) => model
            .surface_presentation()
            .map(|p| p.format(w))
            .unwrap_or_default(),
        GammaValue::Braid(tb) => {
            let f2 = crate::words::Presentation::free(2);
            format!(
                "central=({},{}) rel={}",
                tb.central.0,
                tb.central.1,
                f2.format(&tb.rel)
            )
        }
    }
}

/// C0-smallness boundedness: for a map whose displacement stays below the
/// systole threshold, the dense-grid maximum of `|phi(gamma(f, x))|` must
/// stay within the coarse probe family's maximum plus the observed defect.
#[derive(Clone, Debug, Serialize)]
pub struct C0SmallReport {
    pub f_desc: String,
    pub probe_max: f64,
    pub dense_max: f64,
    pub defect_bound: f64,
    pub probe_grid: usize,
    pub dense_grid: usize,
    pub pass: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn c0_smallness_check<R: Real>(
    model: &PolygonModel<R>,
    bp: &Basepoint<R>,
    f: &Homeo<R>,
    spec: &QuasimorphismSpec<R>,
    probe_grid: usize,
    dense_grid: usize,
    resolution: usize,
    defect: &DefectEstimate<R>,
) -> Result<C0SmallReport> {
    let z: Vec<SurfacePoint<R>> = bp.points().to_vec();
    let scan = |grid: usize| -> Result<R> {
        let mut best = R::zero();
        for p in model.grid_points(grid) {
            let mut x = z.clone();
            x[0] = p;
            if bp.n() == 2 && p.same_coords(&x[1]) {
                continue;
            }
            match gamma(model, f, &x, bp, resolution).and_then(|v| eval_gamma(spec, &v)) {
                Ok(v) => best = best.max(v.abs()),
                Err(e) if e.is_resample() => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(best)
    };
    let probe_max = scan(probe_grid)?;
    let dense_max = scan(dense_grid)?;
    Ok(C0SmallReport {
        f_desc: f.describe(),
        probe_max: probe_max.as_f64(),
        dense_max: dense_max.as_f64(),
        defect_bound: defect.max_observed.as_f64(),
        probe_grid,
        dense_grid,
        pass: dense_max <= probe_max + defect.max_observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{point_push, CorePath, DiskMap, ElementaryMap, PiecewiseLinear};
    use crate::geom::Point2;
    use crate::qm::{defect_estimate, PreMap};
    use crate::words::Presentation;

    fn genus2_scene() -> (
        PolygonModel<f64>,
        Basepoint<f64>,
        Homeo<f64>,
        QuasimorphismSpec<f64>,
    ) {
        let m: PolygonModel<f64> = PolygonModel::genus(2).unwrap();
        let (a, b) = m.side_endpoints(0);
        let q = (a + b) * 0.5;
        let anchor = q * 0.4;
        let push = point_push(&m, CorePath::PolygonLoop(vec![anchor, q]), 0.05, 1).unwrap();
        let f = Homeo::elementary(ElementaryMap::Twist(push));
        let z = m.canonicalize(anchor).unwrap();
        let bp = Basepoint::new(&m, vec![z]).unwrap();
        let f2 = Presentation::free(2);
        let spec = QuasimorphismSpec::brooks(f2, f2.parse("x1").unwrap(), 1.0)
            .unwrap()
            .with_pre_map(PreMap::HandlebodyRetract(
                m.surface_presentation().unwrap(),
            ))
            .unwrap();
        (m, bp, f, spec)
    }

    #[test]
    fn psi_z_of_point_push_is_one_and_linear_in_k() {
        let (m, bp, f, spec) = genus2_scene();
        let v = psi_z(&m, &bp, &f, &spec, 8).unwrap();
        assert_eq!(v, 1.0);
        for k in 1..=20i64 {
            let vk = psi_z(&m, &bp, &f.power(k), &spec, 8).unwrap();
            assert_eq!(vk, k as f64);
        }
    }

    #[test]
    fn certificate_verdicts() {
        let (m, bp, f, spec) = genus2_scene();
        let cert = certify_undistorted(&m, &bp, &f, &spec, 8).unwrap();
        assert_eq!(cert.verdict, Verdict::Undistorted);
        assert_eq!(cert.psi_z, 1.0);

        let id_cert = certify_undistorted(&m, &bp, &Homeo::identity(), &spec, 8).unwrap();
        assert_eq!(id_cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn psi_mc_identity_and_disk_map_are_exactly_zero() {
        let (m, bp, _, spec) = genus2_scene();
        let est = psi_mc(&m, &bp, &Homeo::identity(), &spec, 500, 8, 3).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
        assert!(!est.high_rejection);

        let c = m.canonicalize(Point2::of(-0.3, -0.3)).unwrap();
        let disk = DiskMap::new(
            &m,
            c,
            0.2,
            PiecewiseLinear::new(vec![(0.0, 3.0), (0.2, 0.0)]).unwrap(),
        )
        .unwrap();
        let g = Homeo::elementary(ElementaryMap::Disk(disk));
        let est = psi_mc(&m, &bp, &g, &spec, 500, 8, 4).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn psi_mc_is_deterministic_and_seed_sensitive() {
        let (m, bp, f, spec) = genus2_scene();
        let a = psi_mc(&m, &bp, &f, &spec, 300, 8, 7).unwrap();
        let b = psi_mc(&m, &bp, &f, &spec, 300, 8, 7).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = psi_mc(&m, &bp, &f, &spec, 300, 8, 8).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn psi_mc_matches_shear_integral() {
        let (m, bp, f, spec) = genus2_scene();
        // analytic value: phi(core class) * integral h(u) L(u) du / (A L)
        let crate::dynamics::ElementaryMap::Twist(tw) = &f.factors()[0].0 else {
            unreachable!()
        };
        let c0 = tw.loop_length();
        let c1 = -tw.slope_sum();
        let integral = tw.profile().integral_weighted(c0, c1);
        let analytic = integral / (m.area() * tw.loop_length());
        let est = psi_mc(&m, &bp, &f, &spec, 20_000, 8, 11).unwrap();
        assert!(
            (est.mean - analytic).abs() <= 3.0 * est.std_error.max(1e-9),
            "mc {} vs analytic {} (se {})",
            est.mean,
            analytic,
            est.std_error
        );
    }

    #[test]
    fn semibound_scan_passes() {
        let (m, bp, f, spec) = genus2_scene();
        let defect = defect_estimate(&spec, 2000, 12, 5).unwrap();
        let report = semibound_scan(&m, &bp, &f, &spec, 50, 6, 4, 8, &defect, 13).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.max_delta_half <= report.max_delta);
        let id_report =
            semibound_scan(&m, &bp, &Homeo::identity(), &spec, 20, 6, 4, 8, &defect, 14)
                .unwrap();
        assert_eq!(id_report.max_delta, 0.0);
    }

    #[test]
    fn norm_estimate_monotone_and_zero_for_identity() {
        let (m, bp, f, spec) = genus2_scene();
        let psi = PsiFunctional::Pointwise { spec };
        let set = sample_norm_set(&m, 12, 21).unwrap();
        let id_norm = norm_estimate(&m, &bp, &psi, &Homeo::identity(), &set, 8).unwrap();
        assert_eq!(id_norm.value, 0.0);
        let small = norm_estimate(&m, &bp, &psi, &f, &set[..5], 8).unwrap();
        let big = norm_estimate(&m, &bp, &psi, &f, &set, 8).unwrap();
        assert!(big.value >= small.value);
    }

    #[test]
    fn growth_of_point_push_is_constant_positive() {
        let (m, bp, f, spec) = genus2_scene();
        let report = growth_estimate(&m, &bp, &f, &spec, 12, 8).unwrap();
        for (_, v) in &report.rows {
            assert_eq!(*v, 1.0);
        }
        assert_eq!(report.limsup_proxy, 1.0);
        let id_report = growth_estimate(&m, &bp, &Homeo::identity(), &spec, 6, 8).unwrap();
        assert!(id_report.rows.iter().all(|r| r.1 == 0.0));
    }

    #[test]
    fn torus_n1_rejects_nonzero_spec() {
        let m: PolygonModel<f64> = PolygonModel::torus();
        let z = m.canonicalize(Point2::of(0.3, 0.3)).unwrap();
        let bp = Basepoint::new(&m, vec![z]).unwrap();
        let f2 = Presentation::free(2);
        let spec = QuasimorphismSpec::brooks(f2, f2.parse("x1").unwrap(), 1.0).unwrap();
        assert!(psi_z(&m, &bp, &Homeo::identity(), &spec, 8).is_err());
        let zero = QuasimorphismSpec::<f64>::zero(f2);
        assert_eq!(psi_z(&m, &bp, &Homeo::identity(), &zero, 8).unwrap(), 0.0);
    }
}
