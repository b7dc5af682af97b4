//! A DSL of explicit area-preserving homeomorphisms isotopic to the
//! identity, each with a canonical analytic isotopy.
//!
//! Elementary maps:
//!
//! * [`AnnulusTwist`] — shear supported in an embedded tube around a closed
//!   polyline core. The tube is developed into mitered flat cells; in the
//!   developed coordinates the map advances a point at transverse offset
//!   `u` along its own fiber by `h(u) * L(u) / L` of arclength, where
//!   `L(u)` is the fiber length. In fiber coordinates this is a unit
//!   Jacobian shear, so the map is exactly area-preserving, restricts to
//!   the identity at `|u| = r` (since `h(+-r) = 0`), and pushes the core
//!   once around the loop when `h(0) = L`.
//! * [`DiskMap`] — rotation by a radius-dependent angle supported in a disk
//!   inside the open cell (polar shear, exactly area-preserving).
//! * [`Translate`] — torus translation.
//!
//! A [`Homeo`] is an ordered composition of elementary factors with integer
//! exponents. Powers and inverses are factor-sequence manipulations, and
//! `apply(power(f, k), x)` performs literally the same float operations as
//! applying `f` k times, so fixed-point identities hold bitwise. The
//! canonical isotopy of a composition is the concatenation of per-factor
//! isotopies (the factor applied first moves first); each factor's isotopy
//! scales its defining displacement linearly in time.

use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geom::{pt, Iso2, Point2};
use crate::sample;
use crate::scalar::Real;
use crate::surface::{PathTrace, PolygonModel, SurfacePoint, TraceStep};
use crate::Result;

/// Piecewise linear function given by knots sorted strictly by abscissa.
/// Evaluation is exact at knots.
#[derive(Clone, Debug)]
pub struct PiecewiseLinear<R> {
    knots: Vec<(R, R)>,
}

impl<R: Real> PiecewiseLinear<R> {
    pub fn new(knots: Vec<(R, R)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::input("profile needs at least two knots"));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::input("profile knots must be strictly increasing"));
            }
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn knots(&self) -> &[(R, R)] {
        &self.knots
    }

    pub fn domain(&self) -> (R, R) {
        (self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }

    pub fn eval(&self, x: R) -> R {
        if x <= self.knots[0].0 {
            return self.knots[0].1;
        }
        for w in self.knots.windows(2) {
            if x == w[0].0 {
                return w[0].1;
            }
            if x < w[1].0 {
                let t = (x - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + (w[1].1 - w[0].1) * t;
            }
        }
        self.knots[self.knots.len() - 1].1
    }

    pub fn max_abs(&self) -> R {
        self.knots
            .iter()
            .map(|k| k.1.abs())
            .fold(R::zero(), R::max)
    }

    /// Exact trapezoid integral over the domain.
    pub fn integral(&self) -> R {
        let mut acc = R::zero();
        for w in self.knots.windows(2) {
            acc += (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / R::of(2.0);
        }
        acc
    }

    /// Exact integral of `x -> eval(x) * (c0 + c1 x)` (piecewise quadratic,
    /// Simpson is exact).
    pub fn integral_weighted(&self, c0: R, c1: R) -> R {
        let mut acc = R::zero();
        let six = R::of(6.0);
        for w in self.knots.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let dx = x1 - x0;
            let xm = (x0 + x1) / R::of(2.0);
            let ym = (y0 + y1) / R::of(2.0);
            let f0 = y0 * (c0 + c1 * x0);
            let fm = ym * (c0 + c1 * xm);
            let f1 = y1 * (c0 + c1 * x1);
            acc += dx * (f0 + R::of(4.0) * fm + f1) / six;
        }
        acc
    }
}

/// How a twist core is specified.
#[derive(Clone, Debug)]
pub enum CorePath<R> {
    /// Torus: polyline in plane lift coordinates. The last point must equal
    /// the first plus an integer vector (the loop closes through that deck
    /// translation).
    TorusLift(Vec<Point2<R>>),
    /// Genus >= 2: polyline in polygon coordinates, closed back to the
    /// first vertex. A vertex lying on a side marks a crossing: the next
    /// segment continues from the paired point.
    PolygonLoop(Vec<Point2<R>>),
}

#[derive(Clone, Debug)]
struct CorePiece<R> {
    dev_a: Point2<R>,
    dir: Point2<R>,
    nrm: Point2<R>,
    s0: R,
    s1: R,
    /// Miter slopes: the cell is `s0 + u*slope_a <= s <= s1 - u*slope_b`.
    slope_a: R,
    slope_b: R,
    /// polygon -> developed plane chart valid on this piece
    chart: Iso2<R>,
}

#[derive(Clone, Debug)]
struct TwistCore<R> {
    pieces: Vec<CorePiece<R>>,
    total_len: R,
    /// Developed-plane holonomy of one loop (used when a fiber walk wraps
    /// past the closure cut).
    holonomy: Iso2<R>,
    /// On the torus every chart is a translation, so lookups wrap through
    /// lattice offsets instead of neighbour charts.
    torus: bool,
}

/// Area-preserving shear supported in an embedded tube of half-width
/// `radius` around a closed core loop. The profile `h` is defined on
/// `[-radius, radius]` with `h(+-radius) = 0`; `h(0) = L` realizes the
/// point-push around the core.
#[derive(Clone, Debug)]
pub struct AnnulusTwist<R> {
    core: TwistCore<R>,
    radius: R,
    profile: PiecewiseLinear<R>,
}

struct FiberPos<R> {
    cell: usize,
    /// arclength from the cell's lower cut along the fiber at offset `u`
    along: R,
    u: R,
}

impl<R: Real> AnnulusTwist<R> {
    pub fn new(
        model: &PolygonModel<R>,
        core: CorePath<R>,
        radius: R,
        profile: PiecewiseLinear<R>,
    ) -> Result<Self> {
        if radius <= R::zero() {
            return Err(Error::geometry("tube radius must be positive"));
        }
        let (lo, hi) = profile.domain();
        if lo != -radius || hi != radius {
            return Err(Error::geometry(
                "profile domain must be exactly [-radius, radius]",
            ));
        }
        if profile.eval(-radius) != R::zero() || profile.eval(radius) != R::zero() {
            return Err(Error::geometry("profile must vanish at the tube boundary"));
        }
        let core = compile_core(model, &core)?;
        let twist = AnnulusTwist {
            core,
            radius,
            profile,
        };
        twist.validate(model)?;
        Ok(twist)
    }

    pub fn loop_length(&self) -> R {
        self.core.total_len
    }

    pub fn radius(&self) -> R {
        self.radius
    }

    pub fn profile(&self) -> &PiecewiseLinear<R> {
        &self.profile
    }

    /// Sum of miter slopes; the fiber at offset `u` has length
    /// `L(u) = L - u * slope_sum`.
    pub fn slope_sum(&self) -> R {
        self.core
            .pieces
            .iter()
            .map(|p| p.slope_a + p.slope_b)
            .fold(R::zero(), |a, b| a + b)
    }

    pub fn fiber_len(&self, u: R) -> R {
        self.core.total_len - u * self.slope_sum()
    }

    fn cell_len(&self, j: usize, u: R) -> R {
        let p = &self.core.pieces[j];
        (p.s1 - p.s0) - u * (p.slope_a + p.slope_b)
    }

    fn cell_count(&self) -> usize {
        self.core.pieces.len()
    }

    /// Candidate polygon->developed charts for representatives of cell `j`:
    /// its own chart plus the neighbour charts (charts change only at
    /// crossing cuts, so these cover points whose representative lies just
    /// across the crossed side; at plain joints the neighbour chart is the
    /// same and the duplicate is harmless).
    fn charts_for(&self, j: usize) -> [Iso2<R>; 3] {
        let m = self.cell_count();
        let own = self.core.pieces[j].chart;
        let next = if j + 1 == m {
            // cell 0 one branch forward
            self.core.holonomy.compose(&self.core.pieces[0].chart)
        } else {
            self.core.pieces[j + 1].chart
        };
        let prev = if j == 0 {
            // cell m-1 one branch backward
            self.core.holonomy.inverse().compose(&self.core.pieces[m - 1].chart)
        } else {
            self.core.pieces[j - 1].chart
        };
        [own, next, prev]
    }

    /// Developed point of a fiber position.
    fn dev_point(&self, pos: &FiberPos<R>) -> Point2<R> {
        let p = &self.core.pieces[pos.cell];
        let s = p.s0 + pos.u * p.slope_a + pos.along;
        p.dev_a + p.dir * (s - p.s0) + p.nrm * pos.u
    }

    /// Fold a developed point of cell `j` back to polygon coordinates.
    fn fold_back(&self, model: &PolygonModel<R>, j: usize, dev: Point2<R>) -> Result<Point2<R>> {
        if self.core.torus {
            // charts are translations, so any pullback wraps to the same
            // representative
            let p = self.core.pieces[j].chart.inverse().apply(dev);
            return Ok(pt(p.x - p.x.floor(), p.y - p.y.floor()));
        }
        let mut best: Option<(R, Point2<R>)> = None;
        for c in self.charts_for(j) {
            let p = c.inverse().apply(dev);
            let clearance = model.boundary_clearance(p);
            if best.map_or(true, |(bc, _)| clearance > bc) {
                best = Some((clearance, p));
            }
        }
        let (clearance, p) = best.unwrap();
        if clearance < -Self::tol() {
            return Err(Error::geometry(
                "tube point has no representative inside the polygon",
            ));
        }
        Ok(p)
    }

    fn tol() -> R {
        R::epsilon() * R::of(1024.0)
    }

    /// Locate a polygon point in the tube.
    fn locate(&self, p: Point2<R>) -> Option<FiberPos<R>> {
        for j in 0..self.cell_count() {
            if let Some(pos) = self.locate_in_cell(j, p) {
                return Some(pos);
            }
        }
        None
    }

    fn locate_in_cell(&self, j: usize, p: Point2<R>) -> Option<FiberPos<R>> {
        let piece = &self.core.pieces[j];
        let membership = |dev: Point2<R>| -> Option<FiberPos<R>> {
            let u = (dev - piece.dev_a).dot(piece.nrm);
            if u.abs() > self.radius {
                return None;
            }
            let s = piece.s0 + (dev - piece.dev_a).dot(piece.dir);
            let lo = piece.s0 + u * piece.slope_a;
            let hi = piece.s1 - u * piece.slope_b;
            if s >= lo && s <= hi {
                Some(FiberPos {
                    cell: j,
                    along: s - lo,
                    u,
                })
            } else {
                None
            }
        };
        if self.core.torus {
            // all charts are lattice translations: test the piece chart
            // composed with every lattice offset that could reach the cell
            let dev = piece.chart.apply(p);
            let (min, max) = self.cell_bbox(j);
            let xs = lattice_range(min.x - dev.x, max.x - dev.x);
            let ys = lattice_range(min.y - dev.y, max.y - dev.y);
            for &ox in &xs {
                for &oy in &ys {
                    if let Some(pos) = membership(dev + Point2::of(ox, oy)) {
                        return Some(pos);
                    }
                }
            }
            None
        } else {
            for c in self.charts_for(j) {
                if let Some(pos) = membership(c.apply(p)) {
                    return Some(pos);
                }
            }
            None
        }
    }

    /// Developed bounding box of cell `j` over the full tube width.
    fn cell_bbox(&self, j: usize) -> (Point2<R>, Point2<R>) {
        let p = &self.core.pieces[j];
        let mut min = pt(R::infinity(), R::infinity());
        let mut max = pt(R::neg_infinity(), R::neg_infinity());
        for u in [-self.radius, self.radius] {
            for s in [p.s0 + u * p.slope_a, p.s1 - u * p.slope_b] {
                let c = p.dev_a + p.dir * (s - p.s0) + p.nrm * u;
                min = pt(min.x.min(c.x), min.y.min(c.y));
                max = pt(max.x.max(c.x), max.y.max(c.y));
            }
        }
        (min, max)
    }

    /// Arclength the point at offset `u` advances along its fiber per
    /// application.
    fn advance(&self, u: R, inverse: bool) -> R {
        let h = if inverse {
            -self.profile.eval(u)
        } else {
            self.profile.eval(u)
        };
        h * self.fiber_len(u) / self.core.total_len
    }

    /// Displacement by whole loops fixes the fiber pointwise; detected
    /// bitwise and short-circuited so such points are exact fixed points.
    fn is_full_loops(&self, u: R) -> bool {
        let h = self.profile.eval(u);
        let m = (h / self.core.total_len).round();
        h == m * self.core.total_len
    }

    fn apply_once(
        &self,
        model: &PolygonModel<R>,
        p: Point2<R>,
        inverse: bool,
    ) -> Result<Point2<R>> {
        let Some(mut pos) = self.locate(p) else {
            return Ok(p);
        };
        if self.is_full_loops(pos.u) {
            return Ok(p);
        }
        let mut rem = self.advance(pos.u, inverse);
        let m = self.cell_count();
        loop {
            if rem >= R::zero() {
                let room = self.cell_len(pos.cell, pos.u) - pos.along;
                if rem <= room {
                    pos.along += rem;
                    break;
                }
                rem -= room;
                pos.cell = (pos.cell + 1) % m;
                pos.along = R::zero();
            } else {
                if -rem <= pos.along {
                    pos.along += rem;
                    break;
                }
                rem += pos.along;
                pos.cell = (pos.cell + m - 1) % m;
                pos.along = self.cell_len(pos.cell, pos.u);
            }
        }
        let dev = self.dev_point(&pos);
        self.fold_back(model, pos.cell, dev)
    }

    /// Trace the canonical isotopy of one application. Motion pieces are
    /// split exactly at miter cuts and at `resolution` time samples and fed
    /// through the folding walker, so crossing records are analytic per
    /// straight sub-segment.
    #[allow(clippy::too_many_arguments)]
    fn trace_once(
        &self,
        model: &PolygonModel<R>,
        p: Point2<R>,
        inverse: bool,
        resolution: usize,
        t_base: R,
        trace: &mut PathTrace<R>,
        lift: &mut Vec<(R, Point2<R>)>,
    ) -> Result<Point2<R>> {
        let Some(start) = self.locate(p) else {
            lift_push(lift, t_base + R::one(), lift_last(lift));
            return Ok(p);
        };
        let total = self.advance(start.u, inverse);
        if total == R::zero() {
            lift_push(lift, t_base + R::one(), lift_last(lift));
            return Ok(p);
        }
        let m = self.cell_count();
        let sign = if total >= R::zero() { R::one() } else { -R::one() };
        let span = total.abs();

        // rotation carrying stored developed directions to the current
        // polygon frame; the chart that actually matched is recovered first
        let mut rot = {
            let target = self.dev_point(&start);
            let mut best = self.core.pieces[start.cell].chart;
            let mut best_d = R::infinity();
            for c in self.charts_for(start.cell) {
                let d = c.apply(p).dist(target);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            rotation_of(&best.inverse())
        };

        let mut pos = start;
        let mut cur = p;
        let mut done = R::zero();
        let mut next_sample = 1usize;
        let res_r = R::of_usize(resolution.max(1));
        let max_iter = 64 + resolution * 4 + (span / self.core.total_len).as_f64() as usize * (m + 2) * 2;
        for _ in 0..max_iter.max(1024) {
            if done >= span {
                break;
            }
            let to_cut = if sign > R::zero() {
                self.cell_len(pos.cell, pos.u) - pos.along
            } else {
                pos.along
            };
            let to_sample = span * R::of_usize(next_sample) / res_r - done;
            let step = to_cut.min(to_sample).min(span - done);
            if step > R::zero() {
                let dir = self.core.pieces[pos.cell].dir;
                let disp = rot.rotate(dir * (step * sign));
                let (q, fold) = model.fold_walk(cur, disp, trace)?;
                rot = rotation_of(&fold).compose(&rot);
                cur = q;
                done += step;
                pos.along += step * sign;
                lift_push(lift, t_base + done / span, lift_last(lift) + disp);
            }
            if done >= span {
                break;
            }
            if step >= to_sample && next_sample < resolution {
                next_sample += 1;
            }
            let mut crossed_cut = false;
            if sign > R::zero() && pos.along >= self.cell_len(pos.cell, pos.u) {
                let wrapped = pos.cell + 1 == m;
                pos.cell = (pos.cell + 1) % m;
                pos.along = R::zero();
                if wrapped {
                    rot = rot.compose(&rotation_of(&self.core.holonomy));
                }
                crossed_cut = true;
            } else if sign < R::zero() && pos.along <= R::zero() {
                let wrapped = pos.cell == 0;
                pos.cell = (pos.cell + m - 1) % m;
                pos.along = self.cell_len(pos.cell, pos.u);
                if wrapped {
                    rot = rot.compose(&rotation_of(&self.core.holonomy.inverse()));
                }
                crossed_cut = true;
            }
            // Cuts at crossing joints touch the polygon sides at u = 0, so
            // the walk can land exactly on a side here. If the continuation
            // points outward, teleport deliberately: endpoint hit detection
            // cannot be trusted at distance ~ulp.
            if crossed_cut {
                if let Some((side, snapped)) =
                    model.side_containing(cur, R::of(1e-9))
                {
                    let next_dir = rot.rotate(self.core.pieces[pos.cell].dir * sign);
                    let (a, b) = model.side_endpoints(side);
                    let outward = -((b - a).normalized().perp());
                    if next_dir.dot(outward) > R::zero() {
                        let pairing = *model.pairing(side);
                        let enter = pairing.apply(snapped);
                        trace.steps.push(TraceStep::Cross {
                            side,
                            exit: snapped,
                            enter,
                        });
                        rot = rotation_of(&pairing).compose(&rot);
                        cur = enter;
                    }
                }
            }
        }
        Ok(cur)
    }

    fn validate(&self, model: &PolygonModel<R>) -> Result<()> {
        let r = self.radius;
        for j in 0..self.cell_count() {
            for u in [-r, r] {
                if self.cell_len(j, u) <= R::zero() {
                    return Err(Error::geometry(
                        "miter cuts collapse a tube cell; shrink the radius",
                    ));
                }
            }
        }
        if self.fiber_len(r) <= R::zero() || self.fiber_len(-r) <= R::zero() {
            return Err(Error::geometry(
                "tube radius exceeds the core bending scale",
            ));
        }
        // cell corners must fold back into the polygon and clear the corner
        // exclusion disks
        for j in 0..self.cell_count() {
            let p = &self.core.pieces[j];
            for (at_end, uu) in [(false, -r), (false, r), (true, -r), (true, r)] {
                let s = if at_end {
                    p.s1 - uu * p.slope_b
                } else {
                    p.s0 + uu * p.slope_a
                };
                let dev = p.dev_a + p.dir * (s - p.s0) + p.nrm * uu;
                let back = self.fold_back(model, j, dev)?;
                if model.corner_exclusion() > R::zero()
                    && model.corner_clearance(back) <= model.corner_exclusion()
                {
                    return Err(Error::geometry(
                        "tube meets a corner exclusion disk; move the core or shrink it",
                    ));
                }
            }
        }
        // embeddedness probe: interior points of each cell must not be
        // claimed by a non-adjacent cell
        let m = self.cell_count();
        for j in 0..m {
            let piece = &self.core.pieces[j];
            for fs in [0.25, 0.5, 0.75] {
                for fu in [-0.8, -0.4, 0.0, 0.4, 0.8] {
                    let u = r * R::of(fu);
                    let lo = piece.s0 + u * piece.slope_a;
                    let hi = piece.s1 - u * piece.slope_b;
                    let s = lo + (hi - lo) * R::of(fs);
                    let dev = piece.dev_a + piece.dir * (s - piece.s0) + piece.nrm * u;
                    let back = self.fold_back(model, j, dev)?;
                    for k in 0..m {
                        let d = (k + m - j) % m;
                        if d == 0 || d == 1 || d == m - 1 {
                            continue;
                        }
                        if self.locate_in_cell(k, back).is_some() {
                            return Err(Error::geometry(
                                "tube self-overlaps at this radius; shrink it",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn lattice_range<R: Real>(lo: R, hi: R) -> Vec<f64> {
    let slack = R::of(1e-9);
    let a = (lo - slack).ceil().as_f64() as i64;
    let b = (hi + slack).floor().as_f64() as i64;
    (a..=b).map(|k| k as f64).collect()
}

fn rotation_of<R: Real>(iso: &Iso2<R>) -> Iso2<R> {
    Iso2 {
        cos: iso.cos,
        sin: iso.sin,
        tx: R::zero(),
        ty: R::zero(),
    }
}

fn lift_last<R: Real>(lift: &[(R, Point2<R>)]) -> Point2<R> {
    lift.last()
        .map(|x| x.1)
        .unwrap_or_else(|| pt(R::zero(), R::zero()))
}

fn lift_push<R: Real>(lift: &mut Vec<(R, Point2<R>)>, t: R, p: Point2<R>) {
    lift.push((t, p));
}

/// Compile a user core path into developed mitered pieces.
fn compile_core<R: Real>(model: &PolygonModel<R>, core: &CorePath<R>) -> Result<TwistCore<R>> {
    let mut scratch = PathTrace::new();
    let mut chart = Iso2::identity();

    // Walk one displacement, updating the polygon->developed chart at every
    // crossing the walker records.
    let mut cur: Point2<R>;
    let walk = |cur: &mut Point2<R>,
                    chart: &mut Iso2<R>,
                    disp: Point2<R>,
                    scratch: &mut PathTrace<R>|
     -> Result<()> {
        let before = scratch.steps.len();
        let (q, _) = model.fold_walk(*cur, disp, scratch)?;
        for step in &scratch.steps[before..] {
            if let TraceStep::Cross { side, .. } = step {
                *chart = chart.compose(&model.pairing(*side).inverse());
            }
        }
        *cur = q;
        Ok(())
    };

    let start_rep: Point2<R>;
    match core {
        CorePath::TorusLift(points) => {
            if points.len() < 2 {
                return Err(Error::geometry("torus core needs at least two points"));
            }
            let first = points[0];
            let last = points[points.len() - 1];
            let dx = (last.x - first.x).round();
            let dy = (last.y - first.y).round();
            let tol = R::of(1e-9);
            if ((last.x - first.x) - dx).abs() > tol || ((last.y - first.y) - dy).abs() > tol {
                return Err(Error::geometry(
                    "torus core must close up to an integer lift offset",
                ));
            }
            start_rep = model.canonicalize(first)?.coords;
            cur = start_rep;
            for w in points.windows(2) {
                walk(&mut cur, &mut chart, w[1] - w[0], &mut scratch)?;
            }
        }
        CorePath::PolygonLoop(points) => {
            if points.len() < 2 {
                return Err(Error::geometry("core needs at least two vertices"));
            }
            let boundary_tol = R::of(1e-9);
            if model.side_containing(points[0], boundary_tol).is_some() {
                return Err(Error::geometry("core must start at an interior vertex"));
            }
            start_rep = points[0];
            cur = start_rep;
            // A vertex on a side marks an explicit crossing: walk up to the
            // side, then teleport through the pairing (hit detection exactly
            // at the endpoint is not reliable, so the crossing is recorded
            // deliberately when the walker did not already catch it).
            let step_to = |cur: &mut Point2<R>,
                               chart: &mut Iso2<R>,
                               target: Point2<R>,
                               scratch: &mut PathTrace<R>|
             -> Result<()> {
                match model.side_containing(target, boundary_tol) {
                    Some((side, snapped)) => {
                        let before = scratch.steps.len();
                        let disp = snapped - *cur;
                        walk(cur, chart, disp, scratch)?;
                        let crossed = scratch.steps[before..].iter().any(
                            |s| matches!(s, TraceStep::Cross { side: c, .. } if *c == side),
                        );
                        if !crossed {
                            let exit = snapped;
                            let enter = model.pairing(side).apply(exit);
                            if cur.dist(exit) > R::of(1e-9) {
                                return Err(Error::geometry(
                                    "walk to a crossing vertex ended away from it",
                                ));
                            }
                            scratch.steps.push(TraceStep::Cross { side, exit, enter });
                            *chart = chart.compose(&model.pairing(side).inverse());
                            *cur = enter;
                        }
                        Ok(())
                    }
                    None => {
                        let disp = target - *cur;
                        walk(cur, chart, disp, scratch)
                    }
                }
            };
            for &next in &points[1..] {
                step_to(&mut cur, &mut chart, next, &mut scratch)?;
            }
            if cur.dist(points[0]) > R::of(1e-12) {
                step_to(&mut cur, &mut chart, points[0], &mut scratch)?;
            }
        }
    }

    if cur.dist(start_rep) > R::of(1e-9) {
        return Err(Error::geometry("core loop does not close up"));
    }
    // One full loop advances the developed plane by the final chart:
    // dev(s + L, u) = chart_final(dev(s, u)).
    let holonomy = chart;

    // developed pieces from the recorded steps
    struct RawPiece<R> {
        dev_a: Point2<R>,
        dev_b: Point2<R>,
        chart: Iso2<R>,
    }
    let mut raw: Vec<RawPiece<R>> = Vec::new();
    let mut c = Iso2::identity();
    for step in &scratch.steps {
        match step {
            TraceStep::Seg { a, b } => {
                let dev_a = c.apply(*a);
                let dev_b = c.apply(*b);
                if dev_a.dist(dev_b) > R::of(1e-12) {
                    raw.push(RawPiece { dev_a, dev_b, chart: c });
                }
            }
            TraceStep::Cross { side, .. } => {
                c = c.compose(&model.pairing(*side).inverse());
            }
        }
    }
    if raw.is_empty() {
        return Err(Error::geometry("core loop has zero length"));
    }

    // merge collinear same-chart neighbours to keep the cut count low
    let mut merged: Vec<RawPiece<R>> = Vec::new();
    for piece in raw {
        if let Some(last) = merged.last_mut() {
            let d0 = (last.dev_b - last.dev_a).normalized();
            let d1 = (piece.dev_b - piece.dev_a).normalized();
            let same_chart = (last.chart.cos - piece.chart.cos).abs() < R::of(1e-12)
                && (last.chart.sin - piece.chart.sin).abs() < R::of(1e-12)
                && (last.chart.tx - piece.chart.tx).abs() < R::of(1e-12)
                && (last.chart.ty - piece.chart.ty).abs() < R::of(1e-12);
            if same_chart
                && d0.cross(d1).abs() < R::of(1e-12)
                && d0.dot(d1) > R::zero()
                && last.dev_b.dist(piece.dev_a) < R::of(1e-12)
            {
                last.dev_b = piece.dev_b;
                continue;
            }
        }
        merged.push(piece);
    }

    let mut pieces: Vec<CorePiece<R>> = Vec::new();
    let mut s = R::zero();
    for rp in &merged {
        let len = rp.dev_a.dist(rp.dev_b);
        let dir = (rp.dev_b - rp.dev_a) / len;
        pieces.push(CorePiece {
            dev_a: rp.dev_a,
            dir,
            nrm: dir.perp(),
            s0: s,
            s1: s + len,
            slope_a: R::zero(),
            slope_b: R::zero(),
            chart: rp.chart,
        });
        s += len;
    }

    // miter slopes (the closure joint compares against the holonomy-rotated
    // first direction)
    let m = pieces.len();
    for j in 0..m {
        let t_in = pieces[j].dir;
        let t_out = if j + 1 == m {
            holonomy.rotate(pieces[0].dir)
        } else {
            pieces[j + 1].dir
        };
        let phi = t_in.cross(t_out).atan2(t_in.dot(t_out));
        if phi.abs() > R::of(2.8) {
            return Err(Error::geometry("core doubles back on itself at a joint"));
        }
        let tan_half = (phi / R::of(2.0)).tan();
        pieces[j].slope_b = tan_half;
        pieces[(j + 1) % m].slope_a = tan_half;
    }

    Ok(TwistCore {
        total_len: s,
        pieces,
        holonomy,
        torus: model.is_torus(),
    })
}

/// Rotation by a radius-dependent angle supported in a disk inside the open
/// cell. The angle profile vanishes at the disk boundary.
#[derive(Clone, Debug)]
pub struct DiskMap<R> {
    pub center: Point2<R>,
    pub radius: R,
    pub angle: PiecewiseLinear<R>,
}

impl<R: Real> DiskMap<R> {
    pub fn new(
        model: &PolygonModel<R>,
        center: SurfacePoint<R>,
        radius: R,
        angle: PiecewiseLinear<R>,
    ) -> Result<Self> {
        if radius <= R::zero() {
            return Err(Error::geometry("disk radius must be positive"));
        }
        let (lo, hi) = angle.domain();
        if lo != R::zero() || hi != radius {
            return Err(Error::geometry("angle profile domain must be [0, radius]"));
        }
        if angle.eval(radius) != R::zero() {
            return Err(Error::geometry("angle must vanish at the disk boundary"));
        }
        if model.boundary_clearance(center.coords) <= radius {
            return Err(Error::geometry("disk leaks out of the open cell"));
        }
        if model.corner_exclusion() > R::zero()
            && model.corner_clearance(center.coords) <= radius + model.corner_exclusion()
        {
            return Err(Error::geometry("disk meets a corner exclusion disk"));
        }
        Ok(DiskMap {
            center: center.coords,
            radius,
            angle,
        })
    }

    fn rotate_about(&self, p: Point2<R>, theta: R) -> Point2<R> {
        let v = p - self.center;
        let (s, c) = theta.sin_cos();
        self.center + pt(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    fn apply_once(&self, p: Point2<R>, inverse: bool) -> Point2<R> {
        let d = p.dist(self.center);
        if d >= self.radius {
            return p;
        }
        let theta = self.angle.eval(d);
        if theta == R::zero() {
            return p;
        }
        self.rotate_about(p, if inverse { -theta } else { theta })
    }

    fn trace_once(
        &self,
        p: Point2<R>,
        inverse: bool,
        resolution: usize,
        t_base: R,
        trace: &mut PathTrace<R>,
        lift: &mut Vec<(R, Point2<R>)>,
    ) -> Point2<R> {
        let d = p.dist(self.center);
        let theta = if d >= self.radius {
            R::zero()
        } else {
            self.angle.eval(d)
        };
        if theta == R::zero() {
            lift_push(lift, t_base + R::one(), lift_last(lift));
            return p;
        }
        let theta = if inverse { -theta } else { theta };
        let res = resolution.max(2);
        let mut prev = p;
        for k in 1..=res {
            let t = R::of_usize(k) / R::of_usize(res);
            let q = self.rotate_about(p, theta * t);
            if prev.dist(q) > R::zero() {
                trace.steps.push(TraceStep::Seg { a: prev, b: q });
            }
            lift_push(lift, t_base + t, lift_last(lift) + (q - prev));
            prev = q;
        }
        prev
    }
}

/// Torus translation (isotopy: straight motion by `t * v`).
#[derive(Clone, Debug)]
pub struct Translate<R> {
    pub v: Point2<R>,
}

/// Elementary measure-preserving map.
#[derive(Clone, Debug)]
pub enum ElementaryMap<R> {
    Twist(AnnulusTwist<R>),
    Disk(DiskMap<R>),
    Translate(Translate<R>),
}

impl<R: Real> ElementaryMap<R> {
    fn apply_once(
        &self,
        model: &PolygonModel<R>,
        p: Point2<R>,
        inverse: bool,
    ) -> Result<Point2<R>> {
        match self {
            ElementaryMap::Twist(t) => t.apply_once(model, p, inverse),
            ElementaryMap::Disk(d) => Ok(d.apply_once(p, inverse)),
            ElementaryMap::Translate(tr) => {
                let v = if inverse { -tr.v } else { tr.v };
                Ok(model.canonicalize(p + v)?.coords)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn trace_once(
        &self,
        model: &PolygonModel<R>,
        p: Point2<R>,
        inverse: bool,
        resolution: usize,
        t_base: R,
        trace: &mut PathTrace<R>,
        lift: &mut Vec<(R, Point2<R>)>,
    ) -> Result<Point2<R>> {
        match self {
            ElementaryMap::Twist(t) => {
                t.trace_once(model, p, inverse, resolution, t_base, trace, lift)
            }
            ElementaryMap::Disk(d) => {
                Ok(d.trace_once(p, inverse, resolution, t_base, trace, lift))
            }
            ElementaryMap::Translate(tr) => {
                let v = if inverse { -tr.v } else { tr.v };
                let res = resolution.max(1);
                let mut cur = p;
                let step = v / R::of_usize(res);
                for k in 1..=res {
                    let (q, _) = model.fold_walk(cur, step, trace)?;
                    lift_push(
                        lift,
                        t_base + R::of_usize(k) / R::of_usize(res),
                        lift_last(lift) + step,
                    );
                    cur = q;
                }
                Ok(cur)
            }
        }
    }
}

/// Composition word of elementary maps with integer exponents. `factors`
/// is stored in application order (the first entry moves first), matching
/// the right-to-left composition convention for the written product.
#[derive(Clone, Debug, Default)]
pub struct Homeo<R> {
    factors: Vec<(ElementaryMap<R>, i64)>,
}

impl<R: Real> Homeo<R> {
    pub fn identity() -> Self {
        Homeo {
            factors: Vec::new(),
        }
    }

    pub fn elementary(map: ElementaryMap<R>) -> Self {
        Homeo {
            factors: vec![(map, 1)],
        }
    }

    pub fn from_factors(factors: Vec<(ElementaryMap<R>, i64)>) -> Self {
        Homeo { factors }
    }

    pub fn factors(&self) -> &[(ElementaryMap<R>, i64)] {
        &self.factors
    }

    pub fn is_identity_word(&self) -> bool {
        self.factors.is_empty()
    }

    /// `f.compose(&g)` applies `g` first (the result is `f o g`).
    pub fn compose(&self, g: &Homeo<R>) -> Homeo<R> {
        let mut factors = g.factors.clone();
        factors.extend(self.factors.iter().cloned());
        Homeo { factors }
    }

    pub fn inverse(&self) -> Homeo<R> {
        Homeo {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(m, e)| (m.clone(), -e))
                .collect(),
        }
    }

    pub fn power(&self, k: i64) -> Homeo<R> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut factors = Vec::new();
        for _ in 0..k.unsigned_abs() {
            factors.extend(base.factors.iter().cloned());
        }
        Homeo { factors }
    }

    /// Total number of elementary applications.
    pub fn application_count(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Evaluate the map. Exponents are applied by literal repetition so
    /// power/iteration identities hold bitwise.
    pub fn apply(&self, model: &PolygonModel<R>, x: &SurfacePoint<R>) -> Result<SurfacePoint<R>> {
        let mut p = x.coords;
        for (map, e) in &self.factors {
            let inverse = *e < 0;
            for _ in 0..e.unsigned_abs() {
                p = map.apply_once(model, p, inverse)?;
            }
        }
        Ok(SurfacePoint::new(p))
    }
}

impl<R: Real> ElementaryMap<R> {
    /// Short human-readable summary for reports.
    pub fn describe(&self) -> String {
        match self {
            ElementaryMap::Twist(t) => format!(
                "twist(L={:.3},r={:.3},peak={:.3})",
                t.loop_length().as_f64(),
                t.radius().as_f64(),
                t.profile().eval(R::zero()).as_f64()
            ),
            ElementaryMap::Disk(d) => format!(
                "disk(r={:.3},angle={:.3})",
                d.radius.as_f64(),
                d.angle.eval(R::zero()).as_f64()
            ),
            ElementaryMap::Translate(t) => {
                format!("translate({:.3},{:.3})", t.v.x.as_f64(), t.v.y.as_f64())
            }
        }
    }
}

impl<R: Real> Homeo<R> {
    /// Summary of the factor word, written left-to-right in application
    /// order.
    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "id".to_string();
        }
        self.factors
            .iter()
            .map(|(m, e)| {
                if *e == 1 {
                    m.describe()
                } else {
                    format!("{}^{}", m.describe(), e)
                }
            })
            .collect::<Vec<_>>()
            .join(" . ")
    }
}

/// Trajectory of a point under the canonical isotopy: the traced path with
/// exact crossing records and (on the torus) the continuous plane lift,
/// sampled at every motion breakpoint. Lift displacements are relative to
/// the starting point; lift time counts elementary applications (factor
/// `i` moves during `[i, i+1]`).
#[derive(Clone, Debug)]
pub struct Trajectory<R> {
    pub trace: PathTrace<R>,
    pub lift: Vec<(R, Point2<R>)>,
    pub end: SurfacePoint<R>,
}

impl<R: Real> Trajectory<R> {
    /// Plane lift translated to start at the given position.
    pub fn lift_from(&self, start: Point2<R>) -> Vec<(R, Point2<R>)> {
        self.lift.iter().map(|&(t, p)| (t, start + p)).collect()
    }
}

/// Evaluate the canonical isotopy of `f` at `x`, recording the trace.
/// `resolution >= 2` is the number of time samples per elementary
/// application; crossing records are computed analytically on each
/// straight sub-segment, not by sampling alone.
pub fn trajectory<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    x: &SurfacePoint<R>,
    resolution: usize,
) -> Result<Trajectory<R>> {
    if resolution < 2 {
        return Err(Error::input("trajectory resolution must be >= 2"));
    }
    let mut trace = PathTrace::new();
    let mut lift = vec![(R::zero(), pt(R::zero(), R::zero()))];
    let mut p = x.coords;
    let mut t_base = R::zero();
    for (map, e) in &f.factors {
        let inverse = *e < 0;
        for _ in 0..e.unsigned_abs() {
            p = map.trace_once(model, p, inverse, resolution, t_base, &mut trace, &mut lift)?;
            t_base += R::one();
        }
    }
    Ok(Trajectory {
        trace,
        lift,
        end: SurfacePoint::new(p),
    })
}

/// Model distance between two points: exact flat distance on the torus;
/// on polygon models the minimum over the direct chord and single-pairing
/// chords (an upper bound for the quotient metric, documented with every
/// report that uses it).
pub fn surface_distance<R: Real>(model: &PolygonModel<R>, a: Point2<R>, b: Point2<R>) -> R {
    if model.is_torus() {
        let mut best = R::infinity();
        for dx in [-1.0, 0.0, 1.0] {
            for dy in [-1.0, 0.0, 1.0] {
                let shifted = a + Point2::of(dx, dy);
                best = best.min(shifted.dist(b));
            }
        }
        best
    } else {
        let mut best = a.dist(b);
        for k in 0..model.side_count() {
            best = best.min(model.pairing(k).apply(a).dist(b));
        }
        best
    }
}

/// Grid lower bound for `d_0(f, g) = sup_x d(f(x), g(x))`. Grid points
/// whose evaluation degenerates are skipped.
pub fn d0_distance<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    g: &Homeo<R>,
    grid: usize,
) -> Result<R> {
    let mut best = R::zero();
    for x in model.grid_points(grid) {
        let (fa, fb) = match (f.apply(model, &x), g.apply(model, &x)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        best = best.max(surface_distance(model, fa.coords, fb.coords));
    }
    Ok(best)
}

/// Monte Carlo check that `f` preserves the normalized area measure:
/// `mu(f(B))` is estimated for random small disks `B` by counting
/// preimages of uniform samples.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub disks: u32,
    pub samples_per_disk: u32,
    pub max_sigma_dev: f64,
    pub pass: bool,
}

pub fn measure_check<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    disks: u32,
    samples_per_disk: u32,
    seed: u64,
) -> Result<MeasureReport> {
    let inv = f.inverse();
    let mut max_sigma_dev = 0.0f64;
    for d in 0..disks {
        let mut rng = sample::rng_for(seed, sample::streams::MEASURE, d as u64);
        let (center, radius) = loop {
            let c = model.sample_point(&mut rng)?;
            let clearance = model.boundary_clearance(c.coords);
            let max_r = clearance * R::of(0.8);
            if max_r > R::of(0.02) {
                let r = sample::range(&mut rng, max_r * R::of(0.3), max_r);
                break (c.coords, r);
            }
        };
        let p_true = (radius * radius * R::of(std::f64::consts::PI) / model.area()).as_f64();
        let mut hits = 0u32;
        let mut draws = 0u32;
        while draws < samples_per_disk {
            let y = match model.sample_point(&mut rng) {
                Ok(y) => y,
                Err(e) if e.is_resample() => continue,
                Err(e) => return Err(e),
            };
            draws += 1;
            match inv.apply(model, &y) {
                Ok(pre) => {
                    if pre.coords.dist(center) < radius {
                        hits += 1;
                    }
                }
                Err(e) if e.is_resample() => continue,
                Err(e) => return Err(e),
            }
        }
        let p_hat = hits as f64 / draws as f64;
        let se = (p_true * (1.0 - p_true) / draws as f64).sqrt().max(1e-12);
        max_sigma_dev = max_sigma_dev.max((p_hat - p_true).abs() / se);
    }
    Ok(MeasureReport {
        disks,
        samples_per_disk,
        max_sigma_dev,
        pass: max_sigma_dev <= 3.0,
    })
}

/// Scan `d_0(f^k, id)` for `k = 1..=k_max` and report the argmin.
pub fn recurrence_probe<R: Real>(
    model: &PolygonModel<R>,
    f: &Homeo<R>,
    k_max: u32,
    grid: usize,
) -> Result<(u32, R)> {
    if k_max < 1 {
        return Err(Error::input("k_max must be >= 1"));
    }
    let points = model.grid_points(grid);
    let mut images: Vec<SurfacePoint<R>> = points.clone();
    let mut best = (1u32, R::infinity());
    for k in 1..=k_max {
        let mut dist = R::zero();
        let mut ok = true;
        for (img, orig) in images.iter_mut().zip(points.iter()) {
            match f.apply(model, img) {
                Ok(next) => {
                    *img = next;
                    dist = dist.max(surface_distance(model, img.coords, orig.coords));
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && dist < best.1 {
            best = (k, dist);
        }
    }
    Ok(best)
}

/// Draw a random homeomorphism from the DSL. The construction below *is*
/// the documented distribution; reports that scan over random maps declare
/// it as their sample family.
pub fn sample_homeo<R: Real>(
    model: &PolygonModel<R>,
    rng: &mut ChaCha8Rng,
    max_factors: usize,
) -> Result<Homeo<R>> {
    let n_factors = 1 + sample::below(rng, max_factors.max(1));
    let mut out = Homeo::identity();
    for _ in 0..n_factors {
        let map = sample_elementary(model, rng)?;
        let exp = if sample::below(rng, 4) == 0 { -1 } else { 1 };
        let single = Homeo {
            factors: vec![(map, exp)],
        };
        out = single.compose(&out);
    }
    Ok(out)
}

fn sample_elementary<R: Real>(
    model: &PolygonModel<R>,
    rng: &mut ChaCha8Rng,
) -> Result<ElementaryMap<R>> {
    for _ in 0..200 {
        let choice = sample::below(rng, if model.is_torus() { 3 } else { 2 });
        let attempt: Result<ElementaryMap<R>> = match (model.is_torus(), choice) {
            (true, 0) => {
                let v = pt(
                    sample::range(rng, R::of(-0.45), R::of(0.45)),
                    sample::range(rng, R::of(-0.45), R::of(0.45)),
                );
                Ok(ElementaryMap::Translate(Translate { v }))
            }
            (_, 1) => sample_disk(model, rng).map(ElementaryMap::Disk),
            _ => sample_twist(model, rng).map(ElementaryMap::Twist),
        };
        match attempt {
            Ok(map) => return Ok(map),
            Err(e) if e.is_resample() || matches!(e, Error::InvalidGeometry(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::geometry("could not sample a valid elementary map"))
}

fn sample_disk<R: Real>(model: &PolygonModel<R>, rng: &mut ChaCha8Rng) -> Result<DiskMap<R>> {
    let c = model.sample_point(rng)?;
    let corner_room = if model.corner_exclusion() > R::zero() {
        model.corner_clearance(c.coords) - model.corner_exclusion()
    } else {
        R::infinity()
    };
    let clearance = model.boundary_clearance(c.coords).min(corner_room);
    let max_r = (clearance * R::of(0.8)).min(R::of(0.3));
    if max_r < R::of(0.05) {
        return Err(Error::degenerate("no room for a disk here"));
    }
    let radius = sample::range(rng, R::of(0.05), max_r);
    let peak = sample::range(rng, R::of(-6.0), R::of(6.0));
    let angle = PiecewiseLinear::new(vec![(R::zero(), peak), (radius, R::zero())])?;
    DiskMap::new(model, c, radius, angle)
}

fn sample_twist<R: Real>(
    model: &PolygonModel<R>,
    rng: &mut ChaCha8Rng,
) -> Result<AnnulusTwist<R>> {
    if model.is_torus() {
        let (dir, max_r): (Point2<R>, f64) = match sample::below(rng, 3) {
            0 => (Point2::of(1.0, 0.0), 0.35),
            1 => (Point2::of(0.0, 1.0), 0.35),
            _ => (Point2::of(1.0, 1.0), 0.25),
        };
        let base = pt(
            sample::range(rng, R::of(0.1), R::of(0.9)),
            sample::range(rng, R::of(0.1), R::of(0.9)),
        );
        let core = CorePath::TorusLift(vec![base, base + dir]);
        let radius = sample::range(rng, R::of(0.06), R::of(max_r));
        let len = dir.norm();
        let peak = if sample::below(rng, 3) == 0 {
            len // point-push
        } else {
            sample::range(rng, -len * R::of(1.5), len * R::of(1.5))
        };
        let profile = PiecewiseLinear::new(vec![
            (-radius, R::zero()),
            (R::zero(), peak),
            (radius, R::zero()),
        ])?;
        AnnulusTwist::new(model, core, radius, profile)
    } else if sample::below(rng, 2) == 0 {
        // contractible interior loop
        let rho = sample::range(rng, R::of(0.25), R::of(0.45));
        let phase = sample::range(rng, R::zero(), R::of(std::f64::consts::TAU));
        let k = 3 + sample::below(rng, 3);
        let mut pts = Vec::new();
        for i in 0..k {
            let ang = phase + R::of(std::f64::consts::TAU) * R::of_usize(i) / R::of_usize(k);
            pts.push(pt(rho * ang.cos(), rho * ang.sin()));
        }
        let core = CorePath::PolygonLoop(pts);
        let radius = sample::range(rng, R::of(0.03), R::of(0.07));
        let peak = sample::range(rng, R::of(-0.8), R::of(0.8));
        let profile = PiecewiseLinear::new(vec![
            (-radius, R::zero()),
            (R::zero(), peak),
            (radius, R::zero()),
        ])?;
        AnnulusTwist::new(model, core, radius, profile)
    } else {
        // essential loop through one side pair
        let side = sample::below(rng, model.side_count());
        let (a, b) = model.side_endpoints(side);
        let frac = sample::range(rng, R::of(0.4), R::of(0.6));
        let q = a + (b - a) * frac;
        let anchor = q * sample::range(rng, R::of(0.3), R::of(0.5));
        let core = CorePath::PolygonLoop(vec![anchor, q]);
        let radius = sample::range(rng, R::of(0.03), R::of(0.08));
        let probe = AnnulusTwist::new(
            model,
            core.clone(),
            radius,
            PiecewiseLinear::new(vec![
                (-radius, R::zero()),
                (R::zero(), R::one()),
                (radius, R::zero()),
            ])?,
        )?;
        let len = probe.loop_length();
        let peak = if sample::below(rng, 2) == 0 {
            len
        } else {
            sample::range(rng, -len, len)
        };
        AnnulusTwist::new(
            model,
            core,
            radius,
            PiecewiseLinear::new(vec![
                (-radius, R::zero()),
                (R::zero(), peak),
                (radius, R::zero()),
            ])?,
        )
    }
}

/// Point-push twist: `h(0)` is set to `winds` times the loop length
/// exactly, so core points are exact fixed points pushed around the loop.
pub fn point_push<R: Real>(
    model: &PolygonModel<R>,
    core: CorePath<R>,
    radius: R,
    winds: i64,
) -> Result<AnnulusTwist<R>> {
    let probe = AnnulusTwist::new(
        model,
        core.clone(),
        radius,
        PiecewiseLinear::new(vec![
            (-radius, R::zero()),
            (R::zero(), R::one()),
            (radius, R::zero()),
        ])?,
    )?;
    let peak = probe.loop_length() * R::of(winds as f64);
    AnnulusTwist::new(
        model,
        core,
        radius,
        PiecewiseLinear::new(vec![
            (-radius, R::zero()),
            (R::zero(), peak),
            (radius, R::zero()),
        ])?,
    )
}
