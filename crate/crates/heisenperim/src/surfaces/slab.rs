//! Bubble sets of polygonal bodies as exact piecewise-quadratic slabs
//! `{|z| ≤ f(x, y)}` closed off by vertical walls over the shadow boundary.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::field::Quadratic;
use super::graph::PlanarDomain;
use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::heisenberg::{IsoLoop, Vec3};
use crate::planar::{cross, ConvexBody, Vec2};

/// One quadratic piece of the top surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticPatch {
    pub poly: Quadratic,
    pub domain: PlanarDomain,
}

/// `c0 + c1 t + c2 t²`.
pub type Quad1 = [f64; 3];

fn quad1(c: &Quad1, t: f64) -> f64 {
    c[0] + c[1] * t + c[2] * t * t
}

fn quad1_integral(c: &Quad1, t0: f64, t1: f64) -> f64 {
    let prim = |t: f64| c[0] * t + c[1] * t * t / 2.0 + c[2] * t * t * t / 3.0;
    prim(t1) - prim(t0)
}

fn quad1_fit(ts: [f64; 3], vs: [f64; 3]) -> Option<Quad1> {
    let a = Matrix3::from_fn(|r, c| ts[r].powi(c as i32));
    let x = a.lu().solve(&Vector3::from(vs))?;
    Some([x[0], x[1], x[2]])
}

/// Wall heights on `[t0, t1]` along the wall parameter `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallPiece {
    pub t0: f64,
    pub t1: f64,
    pub lower: Quad1,
    pub upper: Quad1,
}

/// Vertical wall over the segment `a → b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub a: Vec2,
    pub b: Vec2,
    pub pieces: Vec<WallPiece>,
}

impl Wall {
    pub fn point(&self, t: f64) -> Vec2 {
        self.a + (self.b - self.a) * t
    }

    /// `(lower, upper)` at parameter `t`.
    pub fn heights(&self, t: f64) -> Option<(f64, f64)> {
        self.pieces
            .iter()
            .find(|p| t >= p.t0 - 1e-12 && t <= p.t1 + 1e-12)
            .map(|p| (quad1(&p.lower, t), quad1(&p.upper, t)))
    }

    /// Euclidean area of the wall.
    pub fn area(&self) -> f64 {
        let len = (self.b - self.a).norm();
        len * self
            .pieces
            .iter()
            .map(|p| quad1_integral(&p.upper, p.t0, p.t1) - quad1_integral(&p.lower, p.t0, p.t1))
            .sum::<f64>()
    }

    /// Unit horizontal normal pointing away from the origin.
    pub fn outward_normal(&self) -> Vec2 {
        let e = self.b - self.a;
        let n = Vec2::new(e.y, -e.x).normalize();
        if n.dot(&self.a) < 0.0 {
            -n
        } else {
            n
        }
    }

    fn map(&self, fp: impl Fn(&Vec2) -> Vec2, fz: impl Fn(&Quad1) -> Quad1) -> Wall {
        Wall {
            a: fp(&self.a),
            b: fp(&self.b),
            pieces: self
                .pieces
                .iter()
                .map(|p| WallPiece {
                    t0: p.t0,
                    t1: p.t1,
                    lower: fz(&p.lower),
                    upper: fz(&p.upper),
                })
                .collect(),
        }
    }
}

/// Closed surface `{|z| ≤ f}` with walls; the bottom is the mirror of the top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabSurface {
    pub top: Vec<QuadraticPatch>,
    pub walls: Vec<Wall>,
    /// Shadow polygon, counterclockwise.
    pub support: Vec<Vec2>,
}

/// Exact integral of a quadratic over a convex domain.
fn quadratic_integral(q: &Quadratic, d: &PlanarDomain) -> f64 {
    let corners = match d {
        PlanarDomain::Rect { lo, hi } => {
            vec![*lo, Vec2::new(hi.x, lo.y), *hi, Vec2::new(lo.x, hi.y)]
        }
        PlanarDomain::Polygon { vertices } => vertices.clone(),
    };
    let a = corners[0];
    (1..corners.len() - 1)
        .map(|k| {
            let (b, c) = (corners[k], corners[k + 1]);
            let area = 0.5 * cross(&(b - a), &(c - a));
            area * (q.eval(&(0.5 * (a + b))) + q.eval(&(0.5 * (b + c))) + q.eval(&(0.5 * (c + a))))
                / 3.0
        })
        .sum()
}

impl SlabSurface {
    /// The shadow as a convex body.
    pub fn support_body(&self) -> Result<ConvexBody> {
        ConvexBody::polygon(self.support.clone())
    }

    pub fn patches(&self) -> &[QuadraticPatch] {
        &self.top
    }

    /// Mirror images `z = −f` of the top patches.
    pub fn bottom(&self) -> Vec<QuadraticPatch> {
        self.top
            .iter()
            .map(|p| QuadraticPatch {
                poly: p.poly.scaled(-1.0),
                domain: p.domain.clone(),
            })
            .collect()
    }

    /// Height of the top surface over `p`.
    pub fn top_value(&self, p: &Vec2) -> Option<f64> {
        self.top
            .iter()
            .find(|t| t.domain.contains(p))
            .map(|t| t.poly.eval(p))
    }

    pub fn volume(&self) -> f64 {
        2.0 * self
            .top
            .iter()
            .map(|p| quadratic_integral(&p.poly, &p.domain))
            .sum::<f64>()
    }

    pub fn shadow_area(&self) -> f64 {
        self.top.iter().map(|p| p.domain.area()).sum()
    }

    /// Image under `δ_s`.
    pub fn dilate(&self, s: f64) -> Result<SlabSurface> {
        crate::heisenberg::check_scale(s)?;
        let c = |q: &Quadratic| {
            Quadratic([
                s * s * q.0[0],
                s * q.0[1],
                s * q.0[2],
                q.0[3],
                q.0[4],
                q.0[5],
            ])
        };
        Ok(SlabSurface {
            top: self
                .top
                .iter()
                .map(|p| QuadraticPatch {
                    poly: c(&p.poly),
                    domain: p.domain.scaled(s),
                })
                .collect(),
            walls: self
                .walls
                .iter()
                .map(|w| w.map(|v| v * s, |q| q.map(|c| c * s * s)))
                .collect(),
            support: self.support.iter().map(|v| v * s).collect(),
        })
    }

    /// Mirror image under `(x, y) ↦ (y, x)`.
    pub fn swap_xy(&self) -> SlabSurface {
        let sw = |v: &Vec2| Vec2::new(v.y, v.x);
        SlabSurface {
            top: self
                .top
                .iter()
                .map(|p| {
                    let q = p.poly.0;
                    QuadraticPatch {
                        poly: Quadratic([q[0], q[2], q[1], q[5], q[4], q[3]]),
                        domain: p.domain.swapped(),
                    }
                })
                .collect(),
            walls: self.walls.iter().map(|w| w.map(sw, |q| *q)).collect(),
            support: self.support.iter().rev().map(sw).collect(),
        }
    }

    /// Triangulation with `n` subdivisions per patch side and wall piece.
    pub fn to_mesh(&self, n: usize) -> TriMesh {
        let n = n.max(1);
        let mut verts = Vec::new();
        let mut tris = Vec::new();
        for p in &self.top {
            let (o, u, v) = match &p.domain {
                PlanarDomain::Rect { lo, hi } => (
                    *lo,
                    Vec2::new(hi.x - lo.x, 0.0),
                    Vec2::new(0.0, hi.y - lo.y),
                ),
                PlanarDomain::Polygon { vertices } => (
                    vertices[0],
                    vertices[1] - vertices[0],
                    vertices[3] - vertices[0],
                ),
            };
            for sign in [1.0, -1.0] {
                let base = verts.len();
                for j in 0..=n {
                    for i in 0..=n {
                        let q = o + u * (i as f64 / n as f64) + v * (j as f64 / n as f64);
                        verts.push(Vec3::new(q.x, q.y, sign * p.poly.eval(&q)));
                    }
                }
                let id = |i: usize, j: usize| base + i + (n + 1) * j;
                for j in 0..n {
                    for i in 0..n {
                        let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                        if sign > 0.0 {
                            tris.push([a, b, c]);
                            tris.push([a, c, d]);
                        } else {
                            tris.push([a, c, b]);
                            tris.push([a, d, c]);
                        }
                    }
                }
            }
        }
        for w in &self.walls {
            let nrm = w.outward_normal();
            for piece in &w.pieces {
                let base = verts.len();
                for i in 0..=n {
                    let t = piece.t0 + (piece.t1 - piece.t0) * i as f64 / n as f64;
                    let q = w.point(t);
                    verts.push(Vec3::new(q.x, q.y, quad1(&piece.lower, t)));
                    verts.push(Vec3::new(q.x, q.y, quad1(&piece.upper, t)));
                }
                for i in 0..n {
                    let (a, b, c, d) = (
                        base + 2 * i,
                        base + 2 * i + 2,
                        base + 2 * i + 3,
                        base + 2 * i + 1,
                    );
                    let e = verts[b] - verts[a];
                    let up = Vec3::z();
                    let outward = e.cross(&up).xy().dot(&nrm) > 0.0;
                    if outward {
                        tris.push([a, b, c]);
                        tris.push([a, c, d]);
                    } else {
                        tris.push([a, c, b]);
                        tris.push([a, d, c]);
                    }
                }
            }
        }
        TriMesh::new(verts, tris)
            .expect("slab mesh")
            .without_collapsed()
    }
}

/// Bubble set of the diamond `|x| + |y| ≤ 1`: `{|z| ≤ (1 − |xy|)/2}` over `[−1, 1]²`.
pub fn build_square_bubble() -> SlabSurface {
    let quad = |sx: f64, sy: f64| {
        let lo = Vec2::new(sx.min(0.0), sy.min(0.0));
        QuadraticPatch {
            poly: Quadratic([0.5, 0.0, 0.0, 0.0, -0.5 * sx * sy, 0.0]),
            domain: PlanarDomain::rect(lo.x, lo.x + 1.0, lo.y, lo.y + 1.0).unwrap(),
        }
    };
    let top = vec![
        quad(1.0, 1.0),
        quad(-1.0, 1.0),
        quad(-1.0, -1.0),
        quad(1.0, -1.0),
    ];
    let corners = [
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
        Vec2::new(-1.0, -1.0),
    ];
    // Along each side the height is (1 − |s|)/2 with s = 2t − 1.
    let walls = (0..4)
        .map(|k| Wall {
            a: corners[k],
            b: corners[(k + 1) % 4],
            pieces: vec![
                WallPiece {
                    t0: 0.0,
                    t1: 0.5,
                    lower: [0.0, -1.0, 0.0],
                    upper: [0.0, 1.0, 0.0],
                },
                WallPiece {
                    t0: 0.5,
                    t1: 1.0,
                    lower: [-1.0, 1.0, 0.0],
                    upper: [1.0, -1.0, 0.0],
                },
            ],
        })
        .collect();
    SlabSurface {
        top,
        walls,
        support: corners.to_vec(),
    }
}

/// Area enclosed by the polyline `pts` and its closing chord.
fn chord_area(pts: &[Vec2]) -> f64 {
    let m = pts.len();
    0.5 * (0..m)
        .map(|k| cross(&pts[k], &pts[(k + 1) % m]))
        .sum::<f64>()
}

struct Loop {
    w: Vec<Vec2>,
}

impl Loop {
    fn m(&self) -> usize {
        self.w.len()
    }

    fn v(&self, k: usize) -> Vec2 {
        self.w[k % self.m()]
    }

    fn e(&self, k: usize) -> Vec2 {
        self.v(k + 1) - self.v(k)
    }

    /// Centered height of the loop point reached from `w_i + α E_i` at `w_j + β E_j`, `j > i`.
    fn height(&self, i: usize, j: usize, alpha: f64, beta: f64) -> f64 {
        let mut pts = vec![self.v(i) + self.e(i) * alpha];
        pts.extend((i + 1..=j).map(|k| self.v(k)));
        pts.push(self.v(j) + self.e(j) * beta);
        chord_area(&pts) - 0.5
    }

    fn offset(&self, i: usize, j: usize, alpha: f64, beta: f64) -> Vec2 {
        self.v(j) + self.e(j) * beta - self.v(i) - self.e(i) * alpha
    }
}

/// Exact slab for the bubble set of a polygonal body, normalized to unit-area
/// isoperimetrix and centered so the slab is symmetric under `z ↦ −z`.
pub fn build_polygonal_bubble(q: &ConvexBody) -> Result<SlabSurface> {
    if q.is_disk() {
        return Err(Error::InvalidBody(
            "slab builder needs a polygonal body".into(),
        ));
    }
    let lp = Loop {
        w: IsoLoop::new(q)?.vertices().to_vec(),
    };
    let m = lp.m();
    let n = m / 2;
    let scale: f64 = lp.w.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * (1.0 + scale * scale);

    let fit_nodes = [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.0, 1.0),
        (0.5, 0.5),
        (0.5, 0.0),
        (0.0, 0.5),
    ];
    let check_nodes = [(1.0, 1.0), (1.0, 0.5), (0.5, 1.0), (0.25, 0.75)];
    let mut top = Vec::with_capacity(m * (n - 1));
    for i in 0..m {
        for j in i + n + 1..i + m {
            let nodes = fit_nodes.map(|(a, b)| lp.offset(i, j, a, b));
            let vals = fit_nodes.map(|(a, b)| lp.height(i, j, a, b));
            let poly = Quadratic::fit(&nodes, &vals)
                .ok_or_else(|| Error::InvalidBody(format!("degenerate patch ({i}, {j})")))?;
            for (a, b) in check_nodes {
                let err = (poly.eval(&lp.offset(i, j, a, b)) - lp.height(i, j, a, b)).abs();
                if err > tol {
                    return Err(Error::InvalidBody(format!(
                        "patch ({i}, {j}) is not quadratic: {err:e}"
                    )));
                }
            }
            let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
                .map(|(a, b)| lp.offset(i, j, a, b));
            top.push(QuadraticPatch {
                poly,
                domain: PlanarDomain::polygon(corners.to_vec())?,
            });
        }
    }

    let mut walls = Vec::with_capacity(m);
    for i in 0..m {
        let j = i + n;
        // σ = α + β runs over [0, 2]; the wall parameter is t = σ/2.
        let ends = |sigma: f64| {
            let a_lo = (sigma - 1.0).max(0.0);
            let a_hi = sigma.min(1.0);
            (
                lp.height(i, j, a_lo, sigma - a_lo),
                lp.height(i, j, a_hi, sigma - a_hi),
            )
        };
        let mut pieces = Vec::new();
        for (s0, s1) in [(0.0, 1.0), (1.0, 2.0)] {
            let ss = [s0, 0.5 * (s0 + s1), s1];
            let ts = ss.map(|s| 0.5 * s);
            let g1 = quad1_fit(ts, ss.map(|s| ends(s).0))
                .ok_or_else(|| Error::InvalidBody("wall fit".into()))?;
            let g2 = quad1_fit(ts, ss.map(|s| ends(s).1))
                .ok_or_else(|| Error::InvalidBody("wall fit".into()))?;
            for s in [s0 + 0.25 * (s1 - s0), s0 + 0.75 * (s1 - s0)] {
                let (h1, h2) = ends(s);
                let err = (quad1(&g1, 0.5 * s) - h1)
                    .abs()
                    .max((quad1(&g2, 0.5 * s) - h2).abs());
                if err > tol {
                    return Err(Error::InvalidBody(format!(
                        "wall {i} is not quadratic: {err:e}"
                    )));
                }
            }
            let d = [g1[0] - g2[0], g1[1] - g2[1], g1[2] - g2[2]];
            let mut cuts = vec![ts[0]];
            cuts.extend(
                quad1_roots(&d)
                    .into_iter()
                    .filter(|&r| r > ts[0] + 1e-12 && r < ts[2] - 1e-12),
            );
            cuts.push(ts[2]);
            cuts.sort_by(f64::total_cmp);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let (lower, upper) = if quad1(&g1, mid) <= quad1(&g2, mid) {
                    (g1, g2)
                } else {
                    (g2, g1)
                };
                pieces.push(WallPiece {
                    t0: w[0],
                    t1: w[1],
                    lower,
                    upper,
                });
            }
        }
        walls.push(Wall {
            a: lp.offset(i, j, 0.0, 0.0),
            b: lp.offset(i, j, 1.0, 1.0),
            pieces,
        });
    }
    let support = (0..m).map(|i| -2.0 * lp.v(i)).collect();
    Ok(SlabSurface {
        top,
        walls,
        support,
    })
}

fn quad1_roots(c: &Quad1) -> Vec<f64> {
    let [c0, c1, c2] = *c;
    let mag = c0.abs() + c1.abs() + c2.abs();
    if mag == 0.0 {
        return vec![];
    }
    if c2.abs() <= 1e-14 * mag {
        if c1.abs() <= 1e-14 * mag {
            return vec![];
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    let qq = -0.5 * (c1 + c1.signum() * sq);
    let mut r = vec![];
    if qq != 0.0 {
        r.push(qq / c2);
        r.push(c0 / qq);
    } else {
        r.push(0.0);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> ConvexBody {
        ConvexBody::regular_ngon(6).unwrap()
    }

    #[test]
    fn square_bubble_volume_and_shadow() {
        let s = build_square_bubble();
        assert!((s.volume() - 3.0).abs() < 1e-14);
        assert!((s.shadow_area() - 4.0).abs() < 1e-14);
        let walls: f64 = s.walls.iter().map(|w| w.area()).sum();
        assert!((walls - 4.0).abs() < 1e-14);
        assert!((s.top_value(&Vec2::new(0.5, -0.5)).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn polygonal_builder_reproduces_square_bubble() {
        let s = build_polygonal_bubble(&ConvexBody::unit_diamond()).unwrap();
        let r = build_square_bubble();
        assert_eq!(s.top.len(), 4);
        assert!((s.volume() - r.volume()).abs() < 1e-12);
        for k in 0..50 {
            let p = Vec2::new(-0.97 + 0.039 * k as f64, 0.83 - 0.031 * k as f64);
            assert!((s.top_value(&p).unwrap() - r.top_value(&p).unwrap()).abs() < 1e-12);
        }
        let wa: f64 = s.walls.iter().map(|w| w.area()).sum();
        assert!((wa - 4.0).abs() < 1e-12);
    }

    #[test]
    fn patches_tile_the_shadow() {
        let s = build_polygonal_bubble(&hexagon()).unwrap();
        assert_eq!(s.top.len(), 6 * 2);
        let shadow = crate::planar::PlanarCurve::closed(s.support.clone())
            .unwrap()
            .signed_area()
            .unwrap();
        assert!((s.shadow_area() - shadow).abs() < 1e-12);
        assert!((shadow - 4.0).abs() < 1e-12);
    }

    #[test]
    fn walls_meet_top_patches() {
        let s = build_polygonal_bubble(&hexagon()).unwrap();
        for w in &s.walls {
            for k in 1..20 {
                let t = k as f64 / 20.0;
                let p = w.point(t) * (1.0 - 1e-12);
                let (lo, hi) = w.heights(t).unwrap();
                let f = s.top_value(&p).unwrap();
                assert!((hi - f).abs() < 1e-9, "upper {hi} vs top {f}");
                assert!((lo + f).abs() < 1e-9, "lower {lo} vs bottom {}", -f);
            }
        }
    }

    #[test]
    fn dilation_and_swap() {
        let s = build_polygonal_bubble(&hexagon()).unwrap();
        let d = s.dilate(1.7).unwrap();
        assert!((d.volume() - 1.7f64.powi(4) * s.volume()).abs() < 1e-12);
        let p = Vec2::new(0.3, -0.2);
        assert!(
            (d.top_value(&(1.7 * p)).unwrap() - 1.7 * 1.7 * s.top_value(&p).unwrap()).abs() < 1e-12
        );
        let w = s.swap_xy();
        assert!(
            (w.top_value(&Vec2::new(p.y, p.x)).unwrap() - s.top_value(&p).unwrap()).abs() < 1e-12
        );
        assert!((w.volume() - s.volume()).abs() < 1e-12);
    }

    #[test]
    fn mesh_export_matches_volume() {
        let s = build_polygonal_bubble(&hexagon()).unwrap();
        let m = s.to_mesh(16).welded(1e-9);
        assert!(m.is_closed(), "{} defects", m.defect_edges());
        assert!((m.volume().unwrap() - s.volume()).abs() < 1e-3 * s.volume());
    }

    #[test]
    fn json_roundtrip() {
        let s = build_square_bubble();
        let j = serde_json::to_string(&s).unwrap();
        let back: SlabSurface = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
