//! Scene-driven experiments over braid cocycles of surface homeomorphisms.
//!
//! Every subcommand reads a TOML scene, runs one experiment, writes a
//! JSON-lines report (no timestamps — reports are byte-reproducible for a
//! fixed seed and worker count), and exits 0 on success, 2 on a property
//! violation, 1 on configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ggqm::cocycle::{cocycle_check, gamma};
use ggqm::dynamics::{measure_check, recurrence_probe, sample_homeo};
use ggqm::gg;
use ggqm::qm;
use ggqm::sample;
use ggqm::words::Presentation;
use ggqm::{Homeo, Point, SurfacePoint};

use ggqm_cli::config::{self, Scene};
use ggqm_cli::report::Reporter;

#[derive(Parser)]
#[command(name = "ggqm", version, about)]
struct Cli {
    /// Scene configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report output file (JSON lines); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the experiment seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Worker threads (0 = automatic). Results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the power range.
    #[arg(long, global = true)]
    k_max: Option<u32>,
    /// Override the evaluation grid density.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Override the scan trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArg {
    /// Named map from the scene's `[maps]` table.
    #[arg(long = "map")]
    map: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the braid cocycle gamma(f, x).
    Gamma {
        #[command(flatten)]
        map: MapArg,
        /// Evaluation configuration "x,y" (n=1) or "x1,y1;x2,y2" (n=2);
        /// defaults to the basepoint.
        #[arg(long)]
        at: Option<String>,
    },
    /// Evaluate the scene quasimorphism on a word or split braid.
    EvalQm {
        /// Word in the source-group grammar (e.g. "x1x2X1").
        #[arg(long, conflicts_with = "braid")]
        element: Option<String>,
        /// Split torus braid "m,n:RELWORD" (e.g. "1,0:x1x2X1X2").
        #[arg(long)]
        braid: Option<String>,
        /// Also evaluate on this power of the element.
        #[arg(long, default_value_t = 1)]
        power: i64,
    },
    /// Monte Carlo estimate of the averaged functional.
    Psi {
        #[command(flatten)]
        map: MapArg,
        /// Stratify the first configuration component (variance reduction;
        /// flagged in the report).
        #[arg(long)]
        stratified: bool,
    },
    /// The homogenization sequence Psi(f^k)/k.
    PsiBar {
        #[command(flatten)]
        map: MapArg,
        /// Also write the series as CSV (k,value,std_error) for plotting.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pointwise functional at the scene basepoint.
    PsiZ {
        #[command(flatten)]
        map: MapArg,
    },
    /// Verify the cocycle identity on random triples.
    CheckCocycle,
    /// Scan the coboundary of the functional against its bound.
    CheckSemibound {
        #[command(flatten)]
        map: MapArg,
        /// "pointwise" (default) checks dPsi_z; "integral" checks dPsi with
        /// Monte Carlo averaging per sampled map.
        #[arg(long, default_value = "pointwise")]
        mode: String,
    },
    /// Pseudo-norm lower bound over a sampled test family.
    NormEst {
        #[command(flatten)]
        map: MapArg,
        /// Use the Monte Carlo functional instead of the pointwise one.
        #[arg(long)]
        mc: bool,
    },
    /// Fixed-point distortion certificate.
    Certify {
        #[command(flatten)]
        map: MapArg,
    },
    /// Scan powers for returns close to the identity.
    Recurrence {
        #[command(flatten)]
        map: MapArg,
    },
    /// Run the bundled property battery on this scene.
    Selftest,
}

fn env_override<T: std::str::FromStr>(name: &str) -> Option<T> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(violations) => {
            if violations {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config_path = cli
        .config
        .clone()
        .or_else(|| env_override("GGQM_CONFIG"))
        .ok_or_else(|| anyhow!("--config is required (or set GGQM_CONFIG)"))?;
    let mut scene = config::load(&config_path)?;

    // precedence: flag > environment > scene file
    let exp = &mut scene.experiment;
    exp.seed = cli.seed.or_else(|| env_override("GGQM_SEED")).unwrap_or(exp.seed);
    exp.samples = cli
        .samples
        .or_else(|| env_override("GGQM_SAMPLES"))
        .unwrap_or(exp.samples);
    exp.workers = cli
        .workers
        .or_else(|| env_override("GGQM_WORKERS"))
        .unwrap_or(exp.workers);
    exp.k_max = cli.k_max.or_else(|| env_override("GGQM_K_MAX")).unwrap_or(exp.k_max);
    exp.grid = cli.grid.or_else(|| env_override("GGQM_GRID")).unwrap_or(exp.grid);
    exp.trials = cli
        .trials
        .or_else(|| env_override("GGQM_TRIALS"))
        .unwrap_or(exp.trials);
    let out = cli.out.clone().or_else(|| env_override("GGQM_OUT"));

    if scene.experiment.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(scene.experiment.workers)
            .build_global()
            .context("building worker pool")?;
    }

    let mut reporter = Reporter::new(out)?;
    let violations = dispatch(&cli.command, &scene, &mut reporter)?;
    reporter.finish()?;
    Ok(violations)
}

fn parse_at(scene: &Scene, at: &Option<String>) -> Result<Vec<SurfacePoint>> {
    match at {
        None => Ok(scene.basepoint.points().to_vec()),
        Some(s) => {
            let mut out = Vec::new();
            for part in s.split(';') {
                let coords: Vec<f64> = part
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| anyhow!("bad coordinate in --at: {e}"))?;
                if coords.len() != 2 {
                    return Err(anyhow!("--at wants pairs like \"0.2,0.3\""));
                }
                out.push(scene.model.canonicalize(Point::of(coords[0], coords[1]))?);
            }
            Ok(out)
        }
    }
}

fn dispatch(command: &Command, scene: &Scene, rep: &mut Reporter) -> Result<bool> {
    let exp = scene.experiment.clone();
    match command {
        Command::Gamma { map, at } => {
            let f = scene.map(&map.map)?;
            let x = parse_at(scene, at)?;
            let value = gamma(&scene.model, f, &x, &scene.basepoint, exp.resolution)?;
            rep.record(json!({
                "command": "gamma",
                "map": map.map,
                "value": gg::describe_gamma(&scene.model, &value),
            }))?;
            Ok(false)
        }
        Command::EvalQm {
            element,
            braid,
            power,
        } => {
            let record = match (element, braid) {
                (Some(word), None) => {
                    let source = match scene.spec.pre_map() {
                        qm::PreMap::HandlebodyRetract(p) => p,
                        _ => scene.spec.base(),
                    };
                    let w = source.parse(word)?.power(*power);
                    let hom = scene.spec.eval_word_hom(&w)?;
                    json!({
                        "command": "eval-qm",
                        "element": source.format(&w),
                        "homogenized": hom,
                    })
                }
                (None, Some(braid)) => {
                    let (central, rel) = braid
                        .split_once(':')
                        .ok_or_else(|| anyhow!("--braid wants \"m,n:RELWORD\""))?;
                    let (m, n) = central
                        .split_once(',')
                        .ok_or_else(|| anyhow!("--braid central part wants \"m,n\""))?;
                    let f2 = Presentation::free(2);
                    let tb = ggqm::cocycle::TorusBraid::new(
                        (m.trim().parse()?, n.trim().parse()?),
                        f2.parse(rel)?,
                    )
                    .power(*power);
                    let hom = scene.spec.eval_braid_hom(&tb)?;
                    json!({
                        "command": "eval-qm",
                        "braid": format!("{},{}:{}", tb.central.0, tb.central.1, f2.format(&tb.rel)),
                        "homogenized": hom,
                    })
                }
                _ => return Err(anyhow!("eval-qm wants exactly one of --element / --braid")),
            };
            rep.record(record)?;
            Ok(false)
        }
        Command::Psi { map, stratified } => {
            let f = scene.map(&map.map)?;
            let sampling = if *stratified {
                gg::Sampling::Stratified
            } else {
                gg::Sampling::Uniform
            };
            let est = gg::psi_mc_sampled(
                &scene.model,
                &scene.basepoint,
                f,
                &scene.spec,
                exp.samples,
                exp.resolution,
                exp.seed,
                sampling,
            )?;
            if est.high_rejection {
                eprintln!(
                    "warning: degenerate-sample rate above 1% ({} rejected of {})",
                    est.rejected, est.samples
                );
            }
            rep.record(json!({
                "command": "psi",
                "map": map.map,
                "estimate": est,
            }))?;
            Ok(false)
        }
        Command::PsiBar { map, csv } => {
            let f = scene.map(&map.map)?;
            let report = gg::psi_bar(
                &scene.model,
                &scene.basepoint,
                f,
                &scene.spec,
                exp.k_max,
                exp.samples,
                exp.resolution,
                exp.seed,
            )?;
            if let Some(path) = csv {
                let mut text = String::from("k,value,std_error\n");
                for row in &report.rows {
                    text.push_str(&format!("{},{},{}\n", row.k, row.value, row.std_error));
                }
                std::fs::write(path, text)
                    .with_context(|| format!("writing CSV {}", path.display()))?;
            }
            rep.record(json!({
                "command": "psi-bar",
                "map": map.map,
                "report": report,
            }))?;
            Ok(false)
        }
        Command::PsiZ { map } => {
            let f = scene.map(&map.map)?;
            let value = gg::psi_z(
                &scene.model,
                &scene.basepoint,
                f,
                &scene.spec,
                exp.resolution,
            )?;
            rep.record(json!({
                "command": "psi-z",
                "map": map.map,
                "value": value,
            }))?;
            Ok(false)
        }
        Command::CheckCocycle => {
            let mut checked = 0u64;
            let mut degenerate = 0u64;
            let mut violations = 0u64;
            for i in 0..exp.trials {
                let mut rng = sample::rng_for(exp.seed, sample::streams::COCYCLE, i);
                let f = sample_homeo(&scene.model, &mut rng, 3)?;
                let g = sample_homeo(&scene.model, &mut rng, 3)?;
                let x: std::result::Result<Vec<SurfacePoint>, _> = (0..scene.basepoint.n())
                    .map(|_| scene.model.sample_point(&mut rng))
                    .collect();
                let Ok(x) = x else {
                    degenerate += 1;
                    continue;
                };
                match cocycle_check(&scene.model, &f, &g, &x, &scene.basepoint, exp.resolution) {
                    Ok(c) => {
                        checked += 1;
                        if !c.holds {
                            violations += 1;
                        }
                    }
                    Err(e) if e.is_resample() => degenerate += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            let degenerate_rate = degenerate as f64 / exp.trials as f64;
            let pass = violations == 0 && degenerate_rate < 0.01;
            rep.record(json!({
                "command": "check-cocycle",
                "trials": exp.trials,
                "checked": checked,
                "violations": violations,
                "degenerate": degenerate,
                "degenerate_rate": degenerate_rate,
                "pass": pass,
            }))?;
            Ok(!pass)
        }
        Command::CheckSemibound { map, mode } => {
            let f = scene.map(&map.map)?;
            let defect = qm::defect_estimate(
                &scene.spec,
                exp.defect_trials,
                exp.defect_max_len,
                exp.seed,
            )?;
            let report = match mode.as_str() {
                "pointwise" => gg::semibound_scan(
                    &scene.model,
                    &scene.basepoint,
                    f,
                    &scene.spec,
                    exp.trials,
                    exp.grid,
                    exp.grid_refine,
                    exp.resolution,
                    &defect,
                    exp.seed,
                )?,
                "integral" => gg::semibound_scan_integral(
                    &scene.model,
                    &scene.basepoint,
                    f,
                    &scene.spec,
                    exp.trials,
                    exp.samples,
                    exp.grid,
                    exp.grid_refine,
                    exp.resolution,
                    &defect,
                    exp.seed,
                )?,
                other => return Err(anyhow!("--mode must be pointwise or integral, got {other:?}")),
            };
            let pass = report.pass;
            rep.record(json!({
                "command": "check-semibound",
                "map": map.map,
                "mode": mode,
                "report": report,
            }))?;
            Ok(!pass)
        }
        Command::NormEst { map, mc } => {
            let f = scene.map(&map.map)?;
            let psi = if *mc {
                gg::PsiFunctional::MonteCarlo {
                    spec: scene.spec.clone(),
                    samples: exp.samples,
                    seed: exp.seed,
                }
            } else {
                gg::PsiFunctional::Pointwise {
                    spec: scene.spec.clone(),
                }
            };
            let set = gg::sample_norm_set(&scene.model, exp.norm_set, exp.seed)?;
            let est = gg::norm_estimate(
                &scene.model,
                &scene.basepoint,
                &psi,
                f,
                &set,
                exp.resolution,
            )?;
            rep.record(json!({
                "command": "norm-est",
                "map": map.map,
                "estimate": est,
            }))?;
            Ok(false)
        }
        Command::Certify { map } => {
            let f = scene.map(&map.map)?;
            let cert = gg::certify_undistorted(
                &scene.model,
                &scene.basepoint,
                f,
                &scene.spec,
                exp.resolution,
            )?;
            rep.record(json!({
                "command": "certify",
                "map": map.map,
                "certificate": cert,
            }))?;
            Ok(false)
        }
        Command::Recurrence { map } => {
            let f = scene.map(&map.map)?;
            let (best_k, best_distance) =
                recurrence_probe(&scene.model, f, exp.k_max, exp.grid)?;
            rep.record(json!({
                "command": "recurrence",
                "map": map.map,
                "best_k": best_k,
                "best_distance": best_distance,
            }))?;
            Ok(false)
        }
        Command::Selftest => selftest(scene, rep),
    }
}

fn selftest(scene: &Scene, rep: &mut Reporter) -> Result<bool> {
    let exp = scene.experiment.clone();
    let mut all_pass = true;
    let mut check = |rep: &mut Reporter, name: &str, pass: bool, detail: serde_json::Value| {
        all_pass &= pass;
        let line = json!({
            "command": "selftest",
            "check": name,
            "pass": pass,
            "detail": detail,
        });
        rep.record(line)
    };

    // 1. cocycle identity on random triples
    {
        let trials = 100u64;
        let mut checked = 0u64;
        let mut degenerate = 0u64;
        let mut violations = 0u64;
        for i in 0..trials {
            let mut rng = sample::rng_for(exp.seed, sample::streams::COCYCLE, i);
            let f = sample_homeo(&scene.model, &mut rng, 3)?;
            let g = sample_homeo(&scene.model, &mut rng, 3)?;
            let x: std::result::Result<Vec<SurfacePoint>, _> = (0..scene.basepoint.n())
                .map(|_| scene.model.sample_point(&mut rng))
                .collect();
            let Ok(x) = x else {
                degenerate += 1;
                continue;
            };
            match cocycle_check(&scene.model, &f, &g, &x, &scene.basepoint, exp.resolution) {
                Ok(c) => {
                    checked += 1;
                    if !c.holds {
                        violations += 1;
                    }
                }
                Err(e) if e.is_resample() => degenerate += 1,
                Err(e) => return Err(e.into()),
            }
        }
        check(
            rep,
            "cocycle-identity",
            violations == 0 && degenerate * 100 < trials,
            json!({"checked": checked, "violations": violations, "degenerate": degenerate}),
        )?;
    }

    // 2. deterministic sampling: identical seeds, identical bits
    {
        let f = scene
            .maps
            .values()
            .next()
            .cloned()
            .unwrap_or_else(Homeo::identity);
        let a = gg::psi_mc(
            &scene.model,
            &scene.basepoint,
            &f,
            &scene.spec,
            500,
            exp.resolution,
            exp.seed,
        )?;
        let b = gg::psi_mc(
            &scene.model,
            &scene.basepoint,
            &f,
            &scene.spec,
            500,
            exp.resolution,
            exp.seed,
        )?;
        check(
            rep,
            "determinism",
            a.mean.to_bits() == b.mean.to_bits(),
            json!({"mean": a.mean}),
        )?;
    }

    // 3. exact quasimorphism identities on random words
    {
        let base = scene.spec.base();
        let mut ok = true;
        for i in 0..20u64 {
            let mut rng = sample::rng_for(exp.seed, sample::streams::DEFECT, 10_000 + i);
            let g = sample::reduced_word_up_to(&mut rng, &base, 10);
            let h = sample::reduced_word_up_to(&mut rng, &base, 8);
            let v = scene.spec.eval_base_hom(&g)?;
            for k in -8i64..=8 {
                ok &= scene.spec.eval_base_hom(&g.power(k))? == k as f64 * v;
            }
            ok &= scene.spec.eval_base_hom(&g.invert())? == -v;
            let conj = h.concat(&g).concat(&h.invert());
            ok &= scene.spec.eval_base_hom(&conj)? == v;
        }
        check(rep, "qm-exactness", ok, json!({"words": 20}))?;
    }

    // 4. centre vanishing for split torus braids
    if matches!(scene.spec.pre_map(), qm::PreMap::TorusRelProjection) {
        let report = qm::normal_vanishing_check(&scene.spec, 200, 12, 10, exp.seed)?;
        check(
            rep,
            "centre-vanishing",
            report.violations == 0,
            json!({"trials": report.trials, "violations": report.violations}),
        )?;
    }

    // 5. area preservation of each named map
    for (name, f) in &scene.maps {
        let r = measure_check(&scene.model, f, 3, 4000, exp.seed)?;
        check(
            rep,
            &format!("measure-preserving:{name}"),
            r.pass,
            json!({"max_sigma_dev": r.max_sigma_dev}),
        )?;
    }

    // 6. systole threshold is positive
    {
        let s = scene.model.systole_threshold(scene.basepoint.n());
        check(rep, "systole-threshold", s > 0.0, json!({"value": s}))?;
    }

    Ok(!all_pass)
}
