use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cross, rot90, Vec2};
use crate::error::{Error, Result};

/// Absolute tolerance on edge cross products and vertex symmetry.
pub const SHAPE_TOL: f64 = 1e-9;

/// A strictly convex, centrally symmetric polygon, counterclockwise.
///
/// `facets[k]` is the vertex of the polar dual belonging to the edge
/// `vertices[k] -> vertices[k+1]`, i.e. the solution of
/// `<v_k, d> = <v_{k+1}, d> = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Polygon {
    vertices: Vec<Vec2>,
    facets: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let m = vertices.len();
        if m < 4 || !m.is_multiple_of(2) {
            return Err(Error::InvalidBody(format!(
                "need an even number of at least 4 vertices, got {m}"
            )));
        }
        if vertices
            .iter()
            .any(|v| !v.x.is_finite() || !v.y.is_finite())
        {
            return Err(Error::InvalidBody("non-finite vertex".into()));
        }
        let n = m / 2;
        for k in 0..m {
            let e0 = vertices[(k + 1) % m] - vertices[k];
            let e1 = vertices[(k + 2) % m] - vertices[(k + 1) % m];
            let c = cross(&e0, &e1);
            if c <= SHAPE_TOL {
                return Err(Error::InvalidBody(format!(
                    "not strictly convex and counterclockwise at vertex {} (cross {c:e})",
                    (k + 1) % m
                )));
            }
        }
        for k in 0..n {
            let s = (vertices[k] + vertices[k + n]).norm();
            if s > SHAPE_TOL {
                return Err(Error::InvalidBody(format!(
                    "not centrally symmetric: v{k} + v{} = {s:e}",
                    k + n
                )));
            }
        }
        let mut facets = Vec::with_capacity(m);
        for k in 0..m {
            let a = vertices[k];
            let b = vertices[(k + 1) % m];
            let det = cross(&a, &b);
            if det <= SHAPE_TOL {
                return Err(Error::InvalidBody(format!(
                    "origin not interior near edge {k}"
                )));
            }
            facets.push(Vec2::new(b.y - a.y, a.x - b.x) / det);
        }
        Ok(Polygon { vertices, facets })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Outward facet normals scaled so that `<d_k, x> = 1` on edge `k`.
    pub fn facets(&self) -> &[Vec2] {
        &self.facets
    }

    /// Half the vertex count.
    pub fn half_count(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn edge(&self, k: usize) -> Vec2 {
        let m = self.vertices.len();
        self.vertices[(k + 1) % m] - self.vertices[k % m]
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.vertices.len()).map(|k| self.edge(k).norm()).sum()
    }
}

impl TryFrom<Vec<[f64; 2]>> for Polygon {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Polygon::new(v.into_iter().map(|p| Vec2::new(p[0], p[1])).collect())
    }
}

impl From<Polygon> for Vec<[f64; 2]> {
    fn from(p: Polygon) -> Self {
        p.vertices.iter().map(|v| [v.x, v.y]).collect()
    }
}

/// Signed shoelace area of a closed vertex loop.
pub(crate) fn shoelace(pts: &[Vec2]) -> f64 {
    let m = pts.len();
    let mut s = 0.0;
    for k in 0..m {
        s += cross(&pts[k], &pts[(k + 1) % m]);
    }
    0.5 * s
}

/// Unit ball of a planar norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    Polygon { vertices: Polygon },
    Disk { radius: f64 },
}

impl ConvexBody {
    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Ok(ConvexBody::Polygon {
            vertices: Polygon::new(vertices)?,
        })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidBody(format!("disk radius {radius}")));
        }
        Ok(ConvexBody::Disk { radius })
    }

    pub fn unit_disk() -> Self {
        ConvexBody::Disk { radius: 1.0 }
    }

    /// The L1 unit ball, vertices (±1,0), (0,±1).
    pub fn unit_diamond() -> Self {
        Self::polygon(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ])
        .expect("diamond")
    }

    /// The L∞ unit ball [-1,1]².
    pub fn unit_square() -> Self {
        Self::polygon(vec![
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ])
        .expect("square")
    }

    /// Regular `k`-gon inscribed in the unit circle with a vertex at (1,0).
    pub fn regular_ngon(k: usize) -> Result<Self> {
        if k < 4 || !k.is_multiple_of(2) {
            return Err(Error::InvalidBody(format!(
                "regular polygon needs an even vertex count >= 4, got {k}"
            )));
        }
        let n = k / 2;
        let mut v: Vec<Vec2> = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / k as f64;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        let half: Vec<Vec2> = v.iter().map(|p| -p).collect();
        v.extend(half);
        Self::polygon(v)
    }

    /// Centrally symmetric polygon whose edges are `±g` for the given
    /// generators (a zonogon). Generators must have pairwise distinct
    /// directions.
    pub fn from_generators(gens: &[Vec2]) -> Result<Self> {
        if gens.len() < 2 {
            return Err(Error::InvalidBody("need at least two generators".into()));
        }
        let mut g: Vec<Vec2> = gens
            .iter()
            .map(|v| {
                if v.y < 0.0 || (v.y == 0.0 && v.x < 0.0) {
                    -v
                } else {
                    *v
                }
            })
            .collect();
        g.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
        let total: Vec2 = g.iter().sum();
        let mut p = -0.5 * total;
        let mut verts = Vec::with_capacity(2 * g.len());
        for e in g
            .iter()
            .chain(g.iter().map(|e| -e).collect::<Vec<_>>().iter())
        {
            verts.push(p);
            p += e;
        }
        Self::polygon(verts)
    }

    /// Reads a body from "x y" lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if nums.len() != 2 {
                return Err(Error::InvalidBody(format!(
                    "line {}: expected \"x y\"",
                    ln + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidBody(format!("line {}: bad number {s:?}", ln + 1)))
            };
            pts.push(Vec2::new(parse(nums[0])?, parse(nums[1])?));
        }
        Self::polygon(pts)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, ConvexBody::Disk { .. })
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            ConvexBody::Polygon { vertices } => Some(vertices),
            ConvexBody::Disk { .. } => None,
        }
    }

    pub fn vertices(&self) -> Option<&[Vec2]> {
        self.as_polygon().map(|p| p.vertices())
    }

    /// Gauge `inf { a : v ∈ aQ }`.
    pub fn norm(&self, v: &Vec2) -> f64 {
        match self {
            ConvexBody::Disk { radius } => v.norm() / radius,
            ConvexBody::Polygon { vertices } => vertices
                .facets()
                .iter()
                .map(|d| d.dot(v))
                .fold(0.0, f64::max),
        }
    }

    /// Support function `max_{x ∈ Q} <x, y>`.
    pub fn dual_norm(&self, y: &Vec2) -> f64 {
        match self {
            ConvexBody::Disk { radius } => radius * y.norm(),
            ConvexBody::Polygon { vertices } => vertices
                .vertices()
                .iter()
                .map(|v| v.dot(y))
                .fold(0.0, f64::max),
        }
    }

    pub fn polar_dual(&self) -> Result<Self> {
        match self {
            ConvexBody::Disk { radius } => Self::disk(1.0 / radius),
            ConvexBody::Polygon { vertices } => Self::polygon(vertices.facets().to_vec()),
        }
    }

    pub fn scaled(&self, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {r}")));
        }
        match self {
            ConvexBody::Disk { radius } => Self::disk(radius * r),
            ConvexBody::Polygon { vertices } => {
                Self::polygon(vertices.vertices().iter().map(|v| v * r).collect())
            }
        }
    }

    /// Image under the quarter turn `(x, y) ↦ (−y, x)`.
    pub fn rotated90(&self) -> Self {
        match self {
            ConvexBody::Disk { .. } => self.clone(),
            ConvexBody::Polygon { vertices } => {
                Self::polygon(vertices.vertices().iter().map(rot90).collect()).expect("rotation")
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ConvexBody::Disk { radius } => PI * radius * radius,
            ConvexBody::Polygon { vertices } => vertices.area(),
        }
    }

    /// Euclidean perimeter.
    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexBody::Disk { radius } => 2.0 * PI * radius,
            ConvexBody::Polygon { vertices } => vertices.perimeter(),
        }
    }

    /// Inradius and circumradius about the origin.
    pub fn in_circum_radii(&self) -> (f64, f64) {
        match self {
            ConvexBody::Disk { radius } => (*radius, *radius),
            ConvexBody::Polygon { vertices } => {
                let r = vertices
                    .facets()
                    .iter()
                    .map(|d| 1.0 / d.norm())
                    .fold(f64::INFINITY, f64::min);
                let big_r = vertices
                    .vertices()
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0, f64::max);
                (r, big_r)
            }
        }
    }

    pub fn contains_point(&self, p: &Vec2, tol: f64) -> bool {
        self.norm(p) <= 1.0 + tol
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &ConvexBody, tol: f64) -> bool {
        match self {
            ConvexBody::Polygon { vertices } => vertices
                .vertices()
                .iter()
                .all(|v| other.contains_point(v, tol)),
            ConvexBody::Disk { radius } => {
                let (r, _) = other.in_circum_radii();
                *radius <= r * (1.0 + tol)
            }
        }
    }

    /// Whether `self` lies in the interior of `other`.
    pub fn is_interior_to(&self, other: &ConvexBody, tol: f64) -> bool {
        match self {
            ConvexBody::Polygon { vertices } => vertices
                .vertices()
                .iter()
                .all(|v| other.norm(v) < 1.0 - tol),
            ConvexBody::Disk { radius } => *radius < other.in_circum_radii().0 * (1.0 - tol),
        }
    }

    /// Equality up to a cyclic relabelling of vertices.
    pub fn approx_eq(&self, other: &ConvexBody, tol: f64) -> bool {
        match (self, other) {
            (ConvexBody::Disk { radius: a }, ConvexBody::Disk { radius: b }) => {
                (a - b).abs() <= tol
            }
            (ConvexBody::Polygon { vertices: p }, ConvexBody::Polygon { vertices: q }) => {
                let (a, b) = (p.vertices(), q.vertices());
                if a.len() != b.len() {
                    return false;
                }
                let m = a.len();
                (0..m).any(|s| (0..m).all(|k| (a[k] - b[(k + s) % m]).norm() <= tol))
            }
            _ => false,
        }
    }

    /// Point on the boundary in direction `theta` (radial parametrization).
    pub fn radial_point(&self, theta: f64) -> Vec2 {
        let u = Vec2::new(theta.cos(), theta.sin());
        u / self.norm(&u)
    }
}
