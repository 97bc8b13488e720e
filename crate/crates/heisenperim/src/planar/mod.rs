//! Convex bodies, norms, polar duals, planar lengths and isoperimetrices.

mod body;
mod curve;

pub use body::{ConvexBody, Polygon, SHAPE_TOL};
pub use curve::{Orientation, PlanarCurve, PlanarSegment};

use crate::error::{Error, Result};

pub type Vec2 = nalgebra::Vector2<f64>;

pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// z-component of the 3-d cross product.
#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Quarter turn counterclockwise.
#[inline]
pub fn rot90(v: &Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

pub fn norm_eval(q: &ConvexBody, v: &Vec2) -> f64 {
    q.norm(v)
}

pub fn dual_norm_eval(q: &ConvexBody, y: &Vec2) -> f64 {
    q.dual_norm(y)
}

pub fn polar_dual(q: &ConvexBody) -> Result<ConvexBody> {
    q.polar_dual()
}

/// Applies the polar dual twice.
pub fn bipolar_check(q: &ConvexBody) -> Result<ConvexBody> {
    q.polar_dual()?.polar_dual()
}

/// Quarter-turned polar dual scaled to the requested area.
pub fn isoperimetrix(q: &ConvexBody, target_area: f64) -> Result<ConvexBody> {
    if !(target_area.is_finite() && target_area > 0.0) {
        return Err(Error::InvalidArgument(format!("target area {target_area}")));
    }
    let i = q.polar_dual()?.rotated90();
    i.scaled((target_area / i.area()).sqrt())
}

pub fn minkowski_length(q: &ConvexBody, curve: &PlanarCurve) -> f64 {
    curve.segments().map(|(a, b)| q.norm(&(b - a))).sum()
}

pub fn segment_content(q: &ConvexBody, l: &PlanarSegment) -> f64 {
    q.dual_norm(&l.vector())
}

/// Half the length of the projection of `Q` onto the normal line of `L`,
/// times the length of `L`.
pub fn segment_content_by_projection(q: &ConvexBody, l: &PlanarSegment) -> f64 {
    let v = l.vector();
    let u = rot90(&v) / v.norm();
    let width = q.dual_norm(&u) + q.dual_norm(&-u);
    0.5 * width * v.norm()
}

pub fn enclosed_area(curve: &PlanarCurve) -> Result<f64> {
    curve.signed_area()
}

pub fn in_circum_radii(q: &ConvexBody) -> (f64, f64) {
    q.in_circum_radii()
}
