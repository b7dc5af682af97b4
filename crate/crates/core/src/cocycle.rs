//! The braid-valued cocycle `gamma(f, x)` and its split coordinates on the
//! torus.
//!
//! For `n = 1` the value of `gamma` is a fundamental group class: an exact
//! integer pair on the torus (`pi_1(T) = Z^2`), a Dehn-reduced word in the
//! surface presentation for genus >= 2. For `n = 2` on the torus the value
//! is a [`TorusBraid`]: an explicit splitting of the pure braid group into a
//! central `Z^2` of simultaneous translations and a relative class in
//! `F_2 = pi_1(T \ {pt})` read from the difference of the two strands.
//! Multiplication is componentwise in these coordinates.

use crate::dynamics::{trajectory, Homeo};
use crate::error::Error;
use crate::geom::{dist_point_segment, pt, Point2};
use crate::scalar::Real;
use crate::surface::{Basepoint, PolygonModel, SurfacePoint, TraceWord};
use crate::words::{Letter, Presentation, Word};
use crate::Result;

/// Element of the two-strand pure braid group of the torus in split
/// coordinates. `central` is the integer lift displacement of strand 1
/// (the simultaneous-translation class); `rel` is the class of the relative
/// path of strand 2 around strand 1 in the punctured torus, a freely
/// reduced word in `F_2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TorusBraid {
    pub central: (i64, i64),
    pub rel: Word,
}

impl TorusBraid {
    pub fn identity() -> Self {
        TorusBraid::default()
    }

    pub fn new(central: (i64, i64), rel: Word) -> Self {
        TorusBraid { central, rel }
    }

    pub fn mul(&self, other: &TorusBraid) -> TorusBraid {
        TorusBraid {
            central: (
                self.central.0 + other.central.0,
                self.central.1 + other.central.1,
            ),
            rel: self.rel.concat(&other.rel),
        }
    }

    pub fn inverse(&self) -> TorusBraid {
        TorusBraid {
            central: (-self.central.0, -self.central.1),
            rel: self.rel.invert(),
        }
    }

    pub fn power(&self, k: i64) -> TorusBraid {
        TorusBraid {
            central: (self.central.0 * k, self.central.1 * k),
            rel: self.rel.power(k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.central == (0, 0) && self.rel.is_empty()
    }
}

/// A value of the cocycle `gamma`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GammaValue {
    /// `n = 1`, torus: class in `pi_1(T) = Z^2`.
    TorusClass(i64, i64),
    /// `n = 1`, genus >= 2: Dehn-reduced representative in the surface
    /// presentation. Equality of representatives is not group equality;
    /// compare with [`GammaValue::eq_in_group`].
    SurfaceWord(Word),
    /// `n = 2`, torus.
    Braid(TorusBraid),
}

impl GammaValue {
    pub fn identity_like(&self) -> GammaValue {
        match self {
            GammaValue::TorusClass(..) => GammaValue::TorusClass(0, 0),
            GammaValue::SurfaceWord(_) => GammaValue::SurfaceWord(Word::empty()),
            GammaValue::Braid(_) => GammaValue::Braid(TorusBraid::identity()),
        }
    }

    /// Componentwise product (same variant required).
    pub fn mul(&self, other: &GammaValue) -> crate::Result<GammaValue> {
        match (self, other) {
            (GammaValue::TorusClass(a, b), GammaValue::TorusClass(c, d)) => {
                Ok(GammaValue::TorusClass(a + c, b + d))
            }
            (GammaValue::SurfaceWord(u), GammaValue::SurfaceWord(v)) => {
                Ok(GammaValue::SurfaceWord(u.concat(v)))
            }
            (GammaValue::Braid(u), GammaValue::Braid(v)) => Ok(GammaValue::Braid(u.mul(v))),
            _ => Err(crate::Error::input("mismatched gamma value kinds")),
        }
    }

    pub fn power(&self, k: i64) -> GammaValue {
        match self {
            GammaValue::TorusClass(a, b) => GammaValue::TorusClass(a * k, b * k),
            GammaValue::SurfaceWord(w) => GammaValue::SurfaceWord(w.power(k)),
            GammaValue::Braid(tb) => GammaValue::Braid(tb.power(k)),
        }
    }

    /// Group equality. `surface` must be supplied for the genus >= 2 case,
    /// where equality goes through Dehn reduction of `u v^-1`.
    pub fn eq_in_group(&self, other: &GammaValue, surface: Option<&Presentation>) -> crate::Result<bool> {
        match (self, other) {
            (GammaValue::TorusClass(a, b), GammaValue::TorusClass(c, d)) => {
                Ok(a == c && b == d)
            }
            (GammaValue::SurfaceWord(u), GammaValue::SurfaceWord(v)) => {
                let p = surface
                    .ok_or_else(|| crate::Error::input("surface presentation required"))?;
                p.eq_in_group(u, v)
            }
            (GammaValue::Braid(u), GammaValue::Braid(v)) => {
                // rel lives in a free group: reduced representatives are canonical
                Ok(u.central == v.central && u.rel == v.rel)
            }
            _ => Ok(false),
        }
    }
}

/// Default isotopy sampling resolution for gamma evaluation.
pub const DEFAULT_RESOLUTION: usize = 16;

/// `gamma(f, x)` for `n = 1`: the class of the isotopy trajectory of `x`
/// closed up through straight connectors at the basepoint. Exact integer
/// pair on the torus; Dehn-reduced surface word for genus >= 2.
pub fn gamma_n1<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    x: &SurfacePoint<R>,
    bp: &Basepoint<R>,
    resolution: usize,
) -> Result<GammaValue> {
    if bp.n() != 1 {
        return Err(Error::input("gamma_n1 needs a 1-point basepoint"));
    }
    let z = bp.point(0);
    let mut trace = model.connector(z, x)?;
    let traj = trajectory(model, f, x, resolution)?;
    trace.append(traj.trace);
    let back = model.connector(&traj.end, z)?;
    trace.append(back);
    match model.trace_to_word(&trace)? {
        TraceWord::Torus { class, .. } => Ok(GammaValue::TorusClass(class.0, class.1)),
        TraceWord::Surface(w) => Ok(GammaValue::SurfaceWord(w)),
    }
}

/// `gamma(f, x)` for `n = 2` on the torus, in split coordinates: the
/// central part is the integer lift displacement of strand 1 around the
/// closed-up loop; the relative part is the class of the difference path
/// `p2(t) - p1(t)` in the punctured torus (puncture at the lattice class
/// of 0), closed up through the connectors. Strand collisions and puncture
/// incidences are degenerate and signal a resample.
pub fn gamma_torus_n2<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    x: &[SurfacePoint<R>; 2],
    bp: &Basepoint<R>,
    resolution: usize,
) -> Result<TorusBraid> {
    if !model.is_torus() || bp.n() != 2 {
        return Err(Error::input(
            "gamma_torus_n2 needs the torus model and a 2-point basepoint",
        ));
    }
    let z = [*bp.point(0), *bp.point(1)];
    let trajs = [
        trajectory(model, f, &x[0], resolution)?,
        trajectory(model, f, &x[1], resolution)?,
    ];

    // per-strand lift polylines over the three phases: opening connectors
    // (unit speed, simultaneous start), trajectories, closing connectors
    let mut strands: Vec<Vec<(R, Point2<R>)>> = Vec::with_capacity(2);
    let t_traj_end: R = {
        let a = trajs[0].lift.last().map(|x| x.0).unwrap_or(R::zero());
        let b = trajs[1].lift.last().map(|x| x.0).unwrap_or(R::zero());
        a.max(b)
    };
    for i in 0..2 {
        let mut poly: Vec<(R, Point2<R>)> = Vec::new();
        // Connectors use the time-symmetric proportional convention: every
        // strand traverses its straight segment linearly over the common
        // interval. A connector pair traversed there-and-back then cancels
        // exactly in the relative path, which is what makes the cocycle
        // identity hold on the nose.
        poly.push((-R::one(), z[i].coords));
        poly.push((R::zero(), x[i].coords));
        // trajectory phase (lift displacements relative to x_i)
        for &(t, d) in &trajs[i].lift {
            poly.push((t, x[i].coords + d));
        }
        let lift_end = x[i].coords
            + trajs[i].lift.last().map(|x| x.1).unwrap_or(pt(R::zero(), R::zero()));
        poly.push((t_traj_end, lift_end));
        // closing connector rep(f(x_i)) -> z_i lifted to the current branch
        let close_disp = z[i].coords - trajs[i].end.coords;
        poly.push((t_traj_end + R::one(), lift_end + close_disp));
        strands.push(poly);
    }

    // central coordinate: exact integer displacement of strand 1's lift
    let o1 = {
        let start = strands[0].first().unwrap().1;
        let end = strands[0].last().unwrap().1;
        let dx = (end.x - start.x).as_f64().round() as i64;
        let dy = (end.y - start.y).as_f64().round() as i64;
        let tol = 1e-6;
        if ((end.x - start.x).as_f64() - dx as f64).abs() > tol
            || ((end.y - start.y).as_f64() - dy as f64).abs() > tol
        {
            return Err(Error::geometry("strand 1 lift did not close to a lattice vector"));
        }
        (dx, dy)
    };

    // relative path on the merged time grid
    let mut times: Vec<R> = strands[0]
        .iter()
        .map(|x| x.0)
        .chain(strands[1].iter().map(|x| x.0))
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| *a == *b);
    let diff: Vec<Point2<R>> = times
        .iter()
        .map(|&t| eval_polyline(&strands[1], t) - eval_polyline(&strands[0], t))
        .collect();

    let (rel, _class) = grid_word(&diff)?;
    Ok(TorusBraid::new(o1, rel))
}

/// Piecewise-linear evaluation of a time-stamped polyline.
fn eval_polyline<R: Real>(poly: &[(R, Point2<R>)], t: R) -> Point2<R> {
    if t <= poly[0].0 {
        return poly[0].1;
    }
    for w in poly.windows(2) {
        if t <= w[1].0 {
            if w[1].0 == w[0].0 {
                return w[1].1;
            }
            let s = (t - w[0].0) / (w[1].0 - w[0].0);
            return w[0].1.lerp(w[1].1, s);
        }
    }
    poly[poly.len() - 1].1
}

/// Crossing word of a plane polyline against the integer grid, read in
/// reverse time order (right-to-left composition), with the `Z^2`
/// displacement class. Lattice-point proximity (a collision or puncture
/// incidence) is a degenerate-sample error.
fn grid_word<R: Real>(poly: &[Point2<R>]) -> Result<(Word, (i64, i64))> {
    let tol = R::of(1e-9);
    let mut letters: Vec<Letter> = Vec::new();
    for w in poly.windows(2) {
        let (p, q) = (w[0], w[1]);
        // lattice proximity guard over the bounding box of the piece
        let lo_x = p.x.min(q.x).floor().as_f64() as i64 - 1;
        let hi_x = p.x.max(q.x).ceil().as_f64() as i64 + 1;
        let lo_y = p.y.min(q.y).floor().as_f64() as i64 - 1;
        let hi_y = p.y.max(q.y).ceil().as_f64() as i64 + 1;
        for gx in lo_x..=hi_x {
            for gy in lo_y..=hi_y {
                let l = Point2::of(gx as f64, gy as f64);
                if dist_point_segment(l, p, q) <= tol {
                    return Err(Error::degenerate(
                        "relative path meets a lattice point (collision/puncture)",
                    ));
                }
            }
        }
        // grid line crossings of this piece, ordered by parameter
        let mut hits: Vec<(R, Letter)> = Vec::new();
        let t_floor = R::epsilon() * R::of(512.0);
        if q.x != p.x {
            let (a, b) = (p.x.min(q.x), p.x.max(q.x));
            for k in (a.ceil().as_f64() as i64)..=(b.floor().as_f64() as i64) {
                let t = (R::of(k as f64) - p.x) / (q.x - p.x);
                if t > t_floor && t <= R::one() {
                    hits.push((t, Letter::new(1, q.x < p.x)));
                }
            }
        }
        if q.y != p.y {
            let (a, b) = (p.y.min(q.y), p.y.max(q.y));
            for k in (a.ceil().as_f64() as i64)..=(b.floor().as_f64() as i64) {
                let t = (R::of(k as f64) - p.y) / (q.y - p.y);
                if t > t_floor && t <= R::one() {
                    hits.push((t, Letter::new(2, q.y < p.y)));
                }
            }
        }
        hits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        letters.extend(hits.into_iter().map(|(_, l)| l));
    }
    let class = letters.iter().fold((0i64, 0i64), |acc, l| match l.gen() {
        1 => (acc.0 + l.sign(), acc.1),
        _ => (acc.0, acc.1 + l.sign()),
    });
    letters.reverse();
    Ok((Word::reduce(letters), class))
}

/// Evaluate `gamma(f, x)` for any supported configuration.
pub fn gamma<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    x: &[SurfacePoint<R>],
    bp: &Basepoint<R>,
    resolution: usize,
) -> Result<GammaValue> {
    match (bp.n(), x.len()) {
        (1, 1) => gamma_n1(model, f, &x[0], bp, resolution),
        (2, 2) => {
            let pair = [x[0], x[1]];
            gamma_torus_n2(model, f, &pair, bp, resolution).map(GammaValue::Braid)
        }
        _ => Err(Error::input("configuration size must match the basepoint")),
    }
}

/// Result of one cocycle identity check `gamma(fg, x) = gamma(f, g(x)) *
/// gamma(g, x)` (exact componentwise / group equality).
#[derive(Clone, Debug)]
pub struct CocycleCheck {
    pub holds: bool,
    pub lhs: GammaValue,
    pub rhs: GammaValue,
}

pub fn cocycle_check<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    g: &Homeo<R>,
    x: &[SurfacePoint<R>],
    bp: &Basepoint<R>,
    resolution: usize,
) -> Result<CocycleCheck> {
    let fg = f.compose(g);
    let gx: Vec<SurfacePoint<R>> = x
        .iter()
        .map(|p| g.apply(model, p))
        .collect::<Result<_>>()?;
    let lhs = gamma(model, &fg, x, bp, resolution)?;
    let at_gx = gamma(model, f, &gx, bp, resolution)?;
    let at_x = gamma(model, g, x, bp, resolution)?;
    let rhs = at_gx.mul(&at_x)?;
    let holds = lhs.eq_in_group(&rhs, model.surface_presentation().as_ref())?;
    Ok(CocycleCheck { holds, lhs, rhs })
}
