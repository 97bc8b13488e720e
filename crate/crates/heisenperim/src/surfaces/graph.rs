use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Dilated, Field, Perturbed, ScalarField2, Swapped};
use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::heisenberg::Vec3;
use crate::planar::{cross, Vec2};
use crate::quadrature::{integrate, Cell, QuadOptions};

/// Planar region under a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanarDomain {
    Rect {
        lo: Vec2,
        hi: Vec2,
    },
    /// Convex, counterclockwise.
    Polygon {
        vertices: Vec<Vec2>,
    },
}

/// Initial cells per side for rectangles and parallelograms.
const GRID: usize = 16;

impl PlanarDomain {
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSurface(format!(
                "empty rectangle [{x0},{x1}]×[{y0},{y1}]"
            )));
        }
        Ok(PlanarDomain::Rect {
            lo: Vec2::new(x0, y0),
            hi: Vec2::new(x1, y1),
        })
    }

    pub fn unit_square() -> Self {
        Self::rect(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidSurface(
                "domain polygon needs 3 vertices".into(),
            ));
        }
        for k in 0..m {
            let e0 = vertices[(k + 1) % m] - vertices[k];
            let e1 = vertices[(k + 2) % m] - vertices[(k + 1) % m];
            if cross(&e0, &e1) <= 0.0 {
                return Err(Error::InvalidSurface(
                    "domain polygon not convex counterclockwise".into(),
                ));
            }
        }
        Ok(PlanarDomain::Polygon { vertices })
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        match self {
            PlanarDomain::Rect { lo, hi } => {
                p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y
            }
            PlanarDomain::Polygon { vertices } => {
                let m = vertices.len();
                (0..m).all(|k| {
                    cross(&(vertices[(k + 1) % m] - vertices[k]), &(p - vertices[k])) >= 0.0
                })
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            PlanarDomain::Rect { lo, hi } => (hi.x - lo.x) * (hi.y - lo.y),
            PlanarDomain::Polygon { vertices } => {
                crate::planar::PlanarCurve::closed(vertices.clone())
                    .and_then(|c| c.signed_area())
                    .unwrap_or(0.0)
            }
        }
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        match self {
            PlanarDomain::Rect { lo, hi } => (*lo, *hi),
            PlanarDomain::Polygon { vertices } => {
                let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for v in vertices {
                    lo = lo.inf(v);
                    hi = hi.sup(v);
                }
                (lo, hi)
            }
        }
    }

    /// Diameter of the bounding box.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    /// Parallelogram decomposition when the domain is one, else a triangle fan.
    fn parallelogram(&self) -> Option<(Vec2, Vec2, Vec2)> {
        match self {
            PlanarDomain::Rect { lo, hi } => Some((
                *lo,
                Vec2::new(hi.x - lo.x, 0.0),
                Vec2::new(0.0, hi.y - lo.y),
            )),
            PlanarDomain::Polygon { vertices } if vertices.len() == 4 => {
                let v = vertices;
                let u = v[1] - v[0];
                let w = v[3] - v[0];
                if (v[2] - (v[0] + u + w)).norm() <= 1e-12 * (u.norm() + w.norm()) {
                    Some((v[0], u, w))
                } else {
                    None
                }
            }
            PlanarDomain::Polygon { .. } => None,
        }
    }

    /// Top-level quadrature cells.
    pub fn cells(&self) -> Vec<Cell> {
        if let Some((o, u, v)) = self.parallelogram() {
            return Cell::grid(o, u, v, GRID);
        }
        let PlanarDomain::Polygon { vertices } = self else {
            unreachable!()
        };
        let c = vertices.iter().sum::<Vec2>() / vertices.len() as f64;
        let m = vertices.len();
        (0..m)
            .flat_map(|k| Cell::Triangle([c, vertices[k], vertices[(k + 1) % m]]).refine(3))
            .collect()
    }

    /// Points on the boundary, `per_edge` per side.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<Vec2> {
        let corners = match self {
            PlanarDomain::Rect { lo, hi } => {
                vec![*lo, Vec2::new(hi.x, lo.y), *hi, Vec2::new(lo.x, hi.y)]
            }
            PlanarDomain::Polygon { vertices } => vertices.clone(),
        };
        let m = corners.len();
        (0..m)
            .flat_map(|k| {
                let (a, b) = (corners[k], corners[(k + 1) % m]);
                (0..per_edge).map(move |s| a + (b - a) * (s as f64 / per_edge as f64))
            })
            .collect()
    }

    pub fn scaled(&self, s: f64) -> PlanarDomain {
        match self {
            PlanarDomain::Rect { lo, hi } => PlanarDomain::Rect {
                lo: lo * s,
                hi: hi * s,
            },
            PlanarDomain::Polygon { vertices } => PlanarDomain::Polygon {
                vertices: vertices.iter().map(|v| v * s).collect(),
            },
        }
    }

    pub fn swapped(&self) -> PlanarDomain {
        match self {
            PlanarDomain::Rect { lo, hi } => PlanarDomain::Rect {
                lo: Vec2::new(lo.y, lo.x),
                hi: Vec2::new(hi.y, hi.x),
            },
            PlanarDomain::Polygon { vertices } => PlanarDomain::Polygon {
                vertices: vertices.iter().rev().map(|v| Vec2::new(v.y, v.x)).collect(),
            },
        }
    }
}

/// Low-discrepancy points in the unit square.
pub(crate) fn halton(k: usize) -> Vec2 {
    let radical = |mut i: usize, b: usize| {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= b as f64;
            r += f * (i % b) as f64;
            i /= b;
        }
        r
    };
    Vec2::new(radical(k + 1, 2), radical(k + 1, 3))
}

/// Graph `z = f(x, y)` over a planar domain, oriented upward.
#[derive(Debug, Clone)]
pub struct GraphSurface {
    field: Field,
    domain: PlanarDomain,
}

impl GraphSurface {
    /// Checks the gradient (and Hessian, if any) against central differences.
    pub fn new(field: Field, domain: PlanarDomain) -> Result<Self> {
        let (lo, hi) = domain.bbox();
        let h = 1e-5 * domain.scale();
        let mut checked = 0;
        for k in 0..64 {
            let u = halton(k);
            let p = lo + Vec2::new(u.x * (hi.x - lo.x), u.y * (hi.y - lo.y));
            if !domain.contains(&p) {
                continue;
            }
            checked += 1;
            let g = field.gradient(&p);
            let f = field.value(&p);
            if !(f.is_finite() && g.x.is_finite() && g.y.is_finite()) {
                return Err(Error::NonFinite(p.x, p.y));
            }
            let ex = Vec2::new(h, 0.0);
            let ey = Vec2::new(0.0, h);
            let fd = Vec2::new(
                (field.value(&(p + ex)) - field.value(&(p - ex))) / (2.0 * h),
                (field.value(&(p + ey)) - field.value(&(p - ey))) / (2.0 * h),
            );
            if (fd - g).norm() > 1e-5 * (1.0 + g.norm()) {
                return Err(Error::InvalidSurface(format!(
                    "gradient inconsistent at ({:.4}, {:.4}): analytic {:?}, difference {:?}",
                    p.x, p.y, g, fd
                )));
            }
            if let Some(hs) = field.hessian(&p) {
                let gx = (field.gradient(&(p + ex)) - field.gradient(&(p - ex))) / (2.0 * h);
                let gy = (field.gradient(&(p + ey)) - field.gradient(&(p - ey))) / (2.0 * h);
                let err = (gx.x - hs[0]).abs() + (gx.y - hs[1]).abs() + (gy.y - hs[2]).abs();
                let mag = hs[0].abs() + hs[1].abs() + hs[2].abs();
                if err > 1e-4 * (1.0 + mag) {
                    return Err(Error::InvalidSurface(format!(
                        "hessian inconsistent at ({:.4}, {:.4})",
                        p.x, p.y
                    )));
                }
            }
        }
        if checked == 0 {
            return Err(Error::InvalidSurface("domain too thin to sample".into()));
        }
        Ok(GraphSurface { field, domain })
    }

    pub fn from_field(field: impl ScalarField2 + 'static, domain: PlanarDomain) -> Result<Self> {
        Self::new(Arc::new(field), domain)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn domain(&self) -> &PlanarDomain {
        &self.domain
    }

    pub fn value(&self, p: &Vec2) -> f64 {
        self.field.value(p)
    }

    pub fn gradient(&self, p: &Vec2) -> Vec2 {
        self.field.gradient(p)
    }

    pub fn has_hessian(&self) -> bool {
        let (lo, hi) = self.domain.bbox();
        self.field.hessian(&(0.5 * (lo + hi))).is_some()
    }

    /// Horizontal projection of the upward normal, scaled by the area element:
    /// `(−y/2 − f_x, x/2 − f_y)`.
    pub fn projected_normal(&self, p: &Vec2) -> Vec2 {
        let g = self.field.gradient(p);
        Vec2::new(-0.5 * p.y - g.x, 0.5 * p.x - g.y)
    }

    /// Graph of `f + t φ`.
    pub fn perturbed(&self, bump: Field, t: f64) -> GraphSurface {
        GraphSurface {
            field: Arc::new(Perturbed {
                base: self.field.clone(),
                bump,
                t,
            }),
            domain: self.domain.clone(),
        }
    }

    /// Graph of the `δ_s` image.
    pub fn dilate(&self, s: f64) -> Result<GraphSurface> {
        crate::heisenberg::check_scale(s)?;
        Ok(GraphSurface {
            field: Arc::new(Dilated {
                base: self.field.clone(),
                s,
            }),
            domain: self.domain.scaled(s),
        })
    }

    /// Mirror image under `(x, y) ↦ (y, x)`.
    pub fn swap_xy(&self) -> GraphSurface {
        GraphSurface {
            field: Arc::new(Swapped(self.field.clone())),
            domain: self.domain.swapped(),
        }
    }

    /// `∫∫ f` over the domain: the volume between the graph and the floor `z = 0`.
    pub fn volume(&self, opts: &QuadOptions) -> Result<f64> {
        Ok(integrate(&self.domain.cells(), |p| self.value(p), opts)?.value)
    }

    /// Triangulated graph, `n` cells per side of each top-level cell block.
    pub fn to_mesh(&self, n: usize) -> TriMesh {
        let level = n.max(1).next_power_of_two().trailing_zeros() as usize;
        let mut verts = Vec::new();
        let mut tris = Vec::new();
        for c in self.domain.cells() {
            for k in c.refine(level) {
                let pts: Vec<Vec2> = match k {
                    Cell::Triangle(t) => t.to_vec(),
                    Cell::Parallelogram { o, u, v } => vec![o, o + u, o + u + v, o + v],
                };
                let base = verts.len();
                verts.extend(pts.iter().map(|p| Vec3::new(p.x, p.y, self.value(p))));
                tris.push([base, base + 1, base + 2]);
                if pts.len() == 4 {
                    tris.push([base, base + 2, base + 3]);
                }
            }
        }
        let tol = 1e-12 * self.domain.scale().max(1e-300);
        TriMesh::new(verts, tris).expect("graph mesh").welded(tol)
    }
}
