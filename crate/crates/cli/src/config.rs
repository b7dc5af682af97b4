//! Scene configuration: a TOML file declaring the surface, the basepoint,
//! the quasimorphism, named map expressions, and experiment defaults.
//! Every geometric constraint is validated at build time with actionable
//! errors.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use ggqm::dynamics::{
    point_push, AnnulusTwist, CorePath, DiskMap, ElementaryMap, PiecewiseLinear, Translate,
};
use ggqm::qm::{BrooksPattern, PreMap};
use ggqm::words::Presentation;
use ggqm::{Basepoint, Homeo, Model, Point, QuasimorphismSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub schema_version: u32,
    pub surface: SurfaceConfig,
    pub basepoint: BasepointConfig,
    #[serde(default)]
    pub quasimorphism: Option<QmConfig>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapExpr>,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: String, // "torus" | "genus"
    #[serde(default)]
    pub genus: Option<u16>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasepointConfig {
    pub z: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmConfig {
    pub base_rank: u16,
    #[serde(default)]
    pub patterns: Vec<PatternConfig>,
    #[serde(default)]
    pub symmetrized: bool,
    /// "identity" | "retract" | "torus_rel"
    pub pre_map: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    pub word: String,
    #[serde(default = "one")]
    pub coeff: f64,
}

fn one() -> f64 {
    1.0
}

/// A map expression: exactly one constructor key.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapExpr {
    #[serde(default)]
    pub twist: Option<TwistConfig>,
    #[serde(default)]
    pub disk: Option<DiskConfig>,
    #[serde(default)]
    pub translate: Option<TranslateConfig>,
    /// product as written: `compose = ["f", "g"]` is `f o g` (g acts first)
    #[serde(default)]
    pub compose: Option<Vec<String>>,
    #[serde(default)]
    pub pow: Option<PowConfig>,
    #[serde(default)]
    pub inv: Option<String>,
    #[serde(default)]
    pub identity: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistConfig {
    /// Torus: plane lift polyline closing up to an integer offset.
    /// Genus: polygon polyline; vertices on a side mark crossings.
    pub core: Vec<[f64; 2]>,
    pub radius: f64,
    /// Generic profile knots `[[u, h], ...]` on `[-radius, radius]`.
    #[serde(default)]
    pub profile: Option<Vec<[f64; 2]>>,
    /// Point-push shorthand: peak displacement of exactly `winds` loops.
    #[serde(default)]
    pub push_winds: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    pub center: [f64; 2],
    pub radius: f64,
    /// Generic angle knots `[[d, theta], ...]` on `[0, radius]`.
    #[serde(default)]
    pub angle: Option<Vec<[f64; 2]>>,
    /// Shorthand: `turns` full rotations at the centre, linear falloff.
    #[serde(default)]
    pub turns: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslateConfig {
    pub v: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowConfig {
    pub of: String,
    pub k: i64,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub samples: u64,
    pub seed: u64,
    pub k_max: u32,
    pub grid: usize,
    pub grid_refine: usize,
    pub resolution: usize,
    pub trials: u64,
    pub defect_trials: u64,
    pub defect_max_len: usize,
    pub norm_set: usize,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            samples: 10_000,
            seed: 1,
            k_max: 16,
            grid: 16,
            grid_refine: 4,
            resolution: 16,
            trials: 1000,
            defect_trials: 10_000,
            defect_max_len: 16,
            norm_set: 16,
            workers: 0,
        }
    }
}

/// A fully validated scene.
pub struct Scene {
    pub model: Model,
    pub basepoint: Basepoint,
    pub spec: QuasimorphismSpec,
    pub maps: BTreeMap<String, Homeo>,
    pub experiment: ExperimentConfig,
}

pub fn load(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading scene config {}", path.display()))?;
    let config: SceneConfig = toml::from_str(&text)
        .with_context(|| format!("parsing scene config {}", path.display()))?;
    build(config)
}

pub fn build(config: SceneConfig) -> Result<Scene> {
    if config.schema_version != SCHEMA_VERSION {
        bail!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            config.schema_version
        );
    }
    let model = match config.surface.kind.as_str() {
        "torus" => Model::torus(),
        "genus" => {
            let g = config
                .surface
                .genus
                .ok_or_else(|| anyhow!("surface.genus is required for kind = \"genus\""))?;
            Model::genus(g).map_err(|e| anyhow!("surface: {e}"))?
        }
        other => bail!("surface.kind must be \"torus\" or \"genus\", got {other:?}"),
    };

    let mut points = Vec::new();
    for (i, &[x, y]) in config.basepoint.z.iter().enumerate() {
        let p = model
            .canonicalize(Point::of(x, y))
            .map_err(|e| anyhow!("basepoint.z[{i}]: {e}"))?;
        points.push(p);
    }
    let basepoint = Basepoint::new(&model, points).map_err(|e| anyhow!("basepoint: {e}"))?;

    let spec = match &config.quasimorphism {
        None => QuasimorphismSpec::zero(Presentation::free(2)),
        Some(qm) => {
            let base = Presentation::free(qm.base_rank);
            let mut terms = Vec::new();
            for (i, pat) in qm.patterns.iter().enumerate() {
                let word = base
                    .parse(&pat.word)
                    .map_err(|e| anyhow!("quasimorphism.patterns[{i}]: {e}"))?;
                terms.push(
                    BrooksPattern::new(word, pat.coeff)
                        .map_err(|e| anyhow!("quasimorphism.patterns[{i}]: {e}"))?,
                );
            }
            let pre_map = match qm.pre_map.as_str() {
                "identity" => PreMap::Identity,
                "retract" => PreMap::HandlebodyRetract(
                    model
                        .surface_presentation()
                        .ok_or_else(|| anyhow!("pre_map \"retract\" needs a genus surface"))?,
                ),
                "torus_rel" => PreMap::TorusRelProjection,
                other => bail!("quasimorphism.pre_map {other:?} unknown"),
            };
            QuasimorphismSpec::new(base, terms, qm.symmetrized, pre_map)
                .map_err(|e| anyhow!("quasimorphism: {e}"))?
        }
    };

    // resolve named maps (references may point at other named maps)
    let mut maps: BTreeMap<String, Homeo> = BTreeMap::new();
    let names: Vec<String> = config.maps.keys().cloned().collect();
    for name in &names {
        let mut visiting = HashSet::new();
        resolve_map(&config, &model, name, &mut maps, &mut visiting)?;
    }

    Ok(Scene {
        model,
        basepoint,
        spec,
        maps,
        experiment: config.experiment.clone(),
    })
}

fn resolve_map(
    config: &SceneConfig,
    model: &Model,
    name: &str,
    done: &mut BTreeMap<String, Homeo>,
    visiting: &mut HashSet<String>,
) -> Result<Homeo> {
    if let Some(h) = done.get(name) {
        return Ok(h.clone());
    }
    if !visiting.insert(name.to_string()) {
        bail!("maps: reference cycle through {name:?}");
    }
    let expr = config
        .maps
        .get(name)
        .ok_or_else(|| anyhow!("maps: unknown map {name:?}"))?;
    let keys = [
        expr.twist.is_some(),
        expr.disk.is_some(),
        expr.translate.is_some(),
        expr.compose.is_some(),
        expr.pow.is_some(),
        expr.inv.is_some(),
        expr.identity.is_some(),
    ];
    if keys.iter().filter(|k| **k).count() != 1 {
        bail!("maps.{name}: exactly one constructor key is required");
    }
    let built = if let Some(t) = &expr.twist {
        Homeo::elementary(ElementaryMap::Twist(
            build_twist(model, t).map_err(|e| anyhow!("maps.{name}: {e}"))?,
        ))
    } else if let Some(d) = &expr.disk {
        Homeo::elementary(ElementaryMap::Disk(
            build_disk(model, d).map_err(|e| anyhow!("maps.{name}: {e}"))?,
        ))
    } else if let Some(t) = &expr.translate {
        if !model.is_torus() {
            bail!("maps.{name}: translations are defined on the torus only");
        }
        Homeo::elementary(ElementaryMap::Translate(Translate {
            v: Point::of(t.v[0], t.v[1]),
        }))
    } else if let Some(parts) = &expr.compose {
        // written order f o g o ...: the last listed acts first
        let mut acc = Homeo::identity();
        for part in parts.iter().rev() {
            let h = resolve_map(config, model, part, done, visiting)?;
            acc = h.compose(&acc);
        }
        acc
    } else if let Some(p) = &expr.pow {
        resolve_map(config, model, &p.of, done, visiting)?.power(p.k)
    } else if let Some(of) = &expr.inv {
        resolve_map(config, model, of, done, visiting)?.inverse()
    } else {
        Homeo::identity()
    };
    visiting.remove(name);
    done.insert(name.to_string(), built.clone());
    Ok(built)
}

fn build_twist(model: &Model, t: &TwistConfig) -> Result<AnnulusTwist<f64>> {
    let pts: Vec<Point> = t.core.iter().map(|&[x, y]| Point::of(x, y)).collect();
    let core = if model.is_torus() {
        CorePath::TorusLift(pts)
    } else {
        CorePath::PolygonLoop(pts)
    };
    match (&t.profile, t.push_winds) {
        (Some(_), Some(_)) => {
            bail!("twist: give either profile or push_winds, not both")
        }
        (None, None) => bail!("twist: profile or push_winds is required"),
        (Some(knots), None) => {
            let profile = PiecewiseLinear::new(
                knots.iter().map(|&[u, h]| (u, h)).collect::<Vec<_>>(),
            )?;
            Ok(AnnulusTwist::new(model, core, t.radius, profile)?)
        }
        (None, Some(winds)) => Ok(point_push(model, core, t.radius, winds)?),
    }
}

fn build_disk(model: &Model, d: &DiskConfig) -> Result<DiskMap<f64>> {
    let center = model.canonicalize(Point::of(d.center[0], d.center[1]))?;
    let angle = match (&d.angle, d.turns) {
        (Some(_), Some(_)) => bail!("disk: give either angle or turns, not both"),
        (None, None) => bail!("disk: angle or turns is required"),
        (Some(knots), None) => {
            PiecewiseLinear::new(knots.iter().map(|&[x, y]| (x, y)).collect::<Vec<_>>())?
        }
        (None, Some(turns)) => PiecewiseLinear::new(vec![
            (0.0, turns * std::f64::consts::TAU),
            (d.radius, 0.0),
        ])?,
    };
    Ok(DiskMap::new(model, center, d.radius, angle)?)
}

impl Scene {
    pub fn map(&self, name: &str) -> Result<&Homeo> {
        self.maps
            .get(name)
            .ok_or_else(|| anyhow!("scene has no map named {name:?} (have: {:?})",
                self.maps.keys().collect::<Vec<_>>()))
    }
}
