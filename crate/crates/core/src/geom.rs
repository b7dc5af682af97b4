//! Small planar geometry kit: points, orientation-preserving isometries,
//! and segment predicates used by the polygon models.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

pub fn pt<R: Real>(x: R, y: R) -> Point2<R> {
    Point2 { x, y }
}

impl<R: Real> Point2<R> {
    pub fn of(x: f64, y: f64) -> Self {
        pt(R::of(x), R::of(y))
    }

    pub fn dot(self, o: Point2<R>) -> R {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product.
    pub fn cross(self, o: Point2<R>) -> R {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> R {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point2<R>) -> R {
        (self - o).norm()
    }

    /// Rotate by +90 degrees.
    pub fn perp(self) -> Point2<R> {
        pt(-self.y, self.x)
    }

    pub fn normalized(self) -> Point2<R> {
        let n = self.norm();
        pt(self.x / n, self.y / n)
    }

    pub fn lerp(self, o: Point2<R>, t: R) -> Point2<R> {
        self + (o - self) * t
    }

    pub fn angle(self) -> R {
        self.y.atan2(self.x)
    }
}

impl<R: Real> Add for Point2<R> {
    type Output = Point2<R>;
    fn add(self, o: Point2<R>) -> Point2<R> {
        pt(self.x + o.x, self.y + o.y)
    }
}

impl<R: Real> Sub for Point2<R> {
    type Output = Point2<R>;
    fn sub(self, o: Point2<R>) -> Point2<R> {
        pt(self.x - o.x, self.y - o.y)
    }
}

impl<R: Real> Mul<R> for Point2<R> {
    type Output = Point2<R>;
    fn mul(self, s: R) -> Point2<R> {
        pt(self.x * s, self.y * s)
    }
}

impl<R: Real> Div<R> for Point2<R> {
    type Output = Point2<R>;
    fn div(self, s: R) -> Point2<R> {
        pt(self.x / s, self.y / s)
    }
}

impl<R: Real> Neg for Point2<R> {
    type Output = Point2<R>;
    fn neg(self) -> Point2<R> {
        pt(-self.x, -self.y)
    }
}

/// Orientation-preserving plane isometry `p -> R(p) + t` (rotation plus
/// translation).
#[derive(Clone, Copy, Debug)]
pub struct Iso2<R> {
    pub cos: R,
    pub sin: R,
    pub tx: R,
    pub ty: R,
}

impl<R: Real> Iso2<R> {
    pub fn identity() -> Self {
        Iso2 {
            cos: R::one(),
            sin: R::zero(),
            tx: R::zero(),
            ty: R::zero(),
        }
    }

    pub fn translation(v: Point2<R>) -> Self {
        Iso2 {
            cos: R::one(),
            sin: R::zero(),
            tx: v.x,
            ty: v.y,
        }
    }

    /// The unique orientation-preserving isometry sending the directed
    /// segment `(a0, a1)` onto `(b0, b1)` (segments must be congruent).
    pub fn mapping_segment(a0: Point2<R>, a1: Point2<R>, b0: Point2<R>, b1: Point2<R>) -> Self {
        let da = (a1 - a0).normalized();
        let db = (b1 - b0).normalized();
        // rotation taking da to db
        let cos = da.dot(db);
        let sin = da.cross(db);
        let rot_a0 = pt(cos * a0.x - sin * a0.y, sin * a0.x + cos * a0.y);
        let t = b0 - rot_a0;
        Iso2 {
            cos,
            sin,
            tx: t.x,
            ty: t.y,
        }
    }

    pub fn apply(&self, p: Point2<R>) -> Point2<R> {
        pt(
            self.cos * p.x - self.sin * p.y + self.tx,
            self.sin * p.x + self.cos * p.y + self.ty,
        )
    }

    /// Apply only the rotation part (for direction vectors).
    pub fn rotate(&self, v: Point2<R>) -> Point2<R> {
        pt(self.cos * v.x - self.sin * v.y, self.sin * v.x + self.cos * v.y)
    }

    pub fn inverse(&self) -> Iso2<R> {
        // R^-1 p - R^-1 t
        let cos = self.cos;
        let sin = -self.sin;
        let tx = -(cos * self.tx - sin * self.ty);
        let ty = -(sin * self.tx + cos * self.ty);
        Iso2 { cos, sin, tx, ty }
    }

    /// `self` after `other`: `(self * other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Iso2<R>) -> Iso2<R> {
        let cos = self.cos * other.cos - self.sin * other.sin;
        let sin = self.sin * other.cos + self.cos * other.sin;
        let t = self.apply(pt(other.tx, other.ty));
        Iso2 {
            cos,
            sin,
            tx: t.x,
            ty: t.y,
        }
    }
}

/// Distance from point `p` to segment `[a, b]`.
pub fn dist_point_segment<R: Real>(p: Point2<R>, a: Point2<R>, b: Point2<R>) -> R {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == R::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).max(R::zero()).min(R::one());
    p.dist(a + ab * t)
}

/// Minimal distance between segments `[a0,a1]` and `[b0,b1]`.
pub fn dist_segment_segment<R: Real>(
    a0: Point2<R>,
    a1: Point2<R>,
    b0: Point2<R>,
    b1: Point2<R>,
) -> R {
    if segments_intersect(a0, a1, b0, b1) {
        return R::zero();
    }
    dist_point_segment(a0, b0, b1)
        .min(dist_point_segment(a1, b0, b1))
        .min(dist_point_segment(b0, a0, a1))
        .min(dist_point_segment(b1, a0, a1))
}

fn segments_intersect<R: Real>(a0: Point2<R>, a1: Point2<R>, b0: Point2<R>, b1: Point2<R>) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    (d1 * d2 < R::zero()) && (d3 * d4 < R::zero())
}

/// Parameter `t in (t_min, 1]` at which the segment `p + t (q - p)` first
/// crosses the line through `a, b`, together with the position `s in [0, 1]`
/// along `[a, b]`. Returns `None` when the segment does not reach the line.
pub fn segment_line_hit<R: Real>(
    p: Point2<R>,
    q: Point2<R>,
    a: Point2<R>,
    b: Point2<R>,
    t_min: R,
) -> Option<(R, R)> {
    let d = q - p;
    let e = b - a;
    let denom = d.cross(e);
    if denom == R::zero() {
        return None;
    }
    let t = (a - p).cross(e) / denom;
    let s = (a - p).cross(d) / denom;
    if t > t_min && t <= R::one() && s >= R::zero() && s <= R::one() {
        Some((t, s))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn iso_from_segment_pair_round_trips() {
        let a0 = Point2::of(0.3, -0.1);
        let a1 = Point2::of(1.2, 0.4);
        let b0 = Point2::of(-0.5, 0.9);
        let b1 = Point2::of(-1.1, 1.6);
        // make |b1-b0| == |a1-a0| by scaling b1 along the direction
        let scale: f64 = (a1 - a0).norm() / (b1 - b0).norm();
        let b1 = b0 + (b1 - b0) * scale;
        let iso = Iso2::mapping_segment(a0, a1, b0, b1);
        assert_abs_diff_eq!(iso.apply(a0).x, b0.x, epsilon = 1e-12);
        assert_abs_diff_eq!(iso.apply(a1).y, b1.y, epsilon = 1e-12);
        let inv = iso.inverse();
        let p = Point2::of(0.77, 0.01);
        let back = inv.apply(iso.apply(p));
        assert_abs_diff_eq!(back.x, p.x, epsilon = 1e-12);
        assert_abs_diff_eq!(back.y, p.y, epsilon = 1e-12);
    }

    #[test]
    fn segment_hit_finds_crossing() {
        let hit = segment_line_hit(
            Point2::of(0.5, 0.5),
            Point2::of(1.5, 0.5),
            Point2::of(1.0, 0.0),
            Point2::of(1.0, 1.0),
            0.0,
        );
        let (t, s) = hit.unwrap();
        assert_abs_diff_eq!(t, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 0.5, epsilon = 1e-12);
    }
}
