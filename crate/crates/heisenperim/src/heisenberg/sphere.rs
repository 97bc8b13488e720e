//! Unit sphere of the CC-metric `d_Q`.
//!
//! Over a planar point `p` with `‖p‖_Q < 1` the ball is the vertical segment
//! between the smallest and largest heights reached by unit-length
//! geodesics, which are arcs of dilated isoperimetrices. For a polygonal body
//! such an arc consists of a partial edge, `m` full edges of a dilate, and a
//! partial edge; fixing the combinatorics leaves a 3×3 linear system.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};

use super::group::Vec3;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::planar::{cross, isoperimetrix, ConvexBody, Vec2};
use crate::surfaces::TriMesh;

/// Height profile of the unit sphere over the planar shadow `Q`.
#[derive(Debug, Clone)]
pub struct SphereProfile {
    body: ConvexBody,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Disk {
        radius: f64,
    },
    Polygon {
        /// Edges of the isoperimetrix divided by their Q-length.
        dirs_ccw: Vec<Vec2>,
        lens_ccw: Vec<f64>,
        dirs_cw: Vec<Vec2>,
        lens_cw: Vec<f64>,
        apex: f64,
    },
}

impl SphereProfile {
    pub fn new(q: &ConvexBody) -> Result<Self> {
        let kind = match q {
            ConvexBody::Disk { radius } => Kind::Disk { radius: *radius },
            ConvexBody::Polygon { .. } => {
                let iso = isoperimetrix(q, 1.0)?;
                let w = iso.vertices().unwrap();
                let m = w.len();
                let edges: Vec<Vec2> = (0..m).map(|k| w[(k + 1) % m] - w[k]).collect();
                let lens_ccw: Vec<f64> = edges.iter().map(|e| q.norm(e)).collect();
                let dirs_ccw: Vec<Vec2> =
                    edges.iter().zip(&lens_ccw).map(|(e, l)| e / *l).collect();
                let dirs_cw: Vec<Vec2> = dirs_ccw.iter().rev().map(|d| -d).collect();
                let lens_cw: Vec<f64> = lens_ccw.iter().rev().copied().collect();
                let perim: f64 = lens_ccw.iter().sum();
                Kind::Polygon {
                    dirs_ccw,
                    lens_ccw,
                    dirs_cw,
                    lens_cw,
                    apex: 1.0 / (perim * perim),
                }
            }
        };
        Ok(SphereProfile {
            body: q.clone(),
            kind,
        })
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    /// Height of the apex over the origin.
    pub fn apex(&self) -> f64 {
        match &self.kind {
            Kind::Disk { radius } => radius * radius / (4.0 * PI),
            Kind::Polygon { apex, .. } => *apex,
        }
    }

    /// Upper height of the unit ball over `p`; `None` outside the shadow.
    pub fn top(&self, p: &Vec2) -> Option<f64> {
        self.extreme(p, true)
    }

    /// Lower height of the unit ball over `p`.
    pub fn bottom(&self, p: &Vec2) -> Option<f64> {
        self.extreme(p, false)
    }

    fn extreme(&self, p: &Vec2, upper: bool) -> Option<f64> {
        let s = if upper { 1.0 } else { -1.0 };
        let g = self.body.norm(p);
        if g > 1.0 + 1e-12 {
            return None;
        }
        match &self.kind {
            Kind::Disk { radius } => {
                let r = p.norm() / radius;
                Some(s * radius * radius * disk_height(r.min(1.0)))
            }
            Kind::Polygon {
                dirs_ccw,
                lens_ccw,
                dirs_cw,
                lens_cw,
                apex,
            } => {
                if p.norm() < 1e-14 {
                    return Some(s * apex);
                }
                if g >= 1.0 - 1e-12 {
                    return Some(s * self.rim_height(p));
                }
                let (dirs, lens) = if upper {
                    (dirs_ccw, lens_ccw)
                } else {
                    (dirs_cw, lens_cw)
                };
                let mut best: Option<f64> = None;
                for z in arc_heights(dirs, lens, p) {
                    best = Some(match best {
                        None => z,
                        Some(b) if upper => b.max(z),
                        Some(b) => b.min(z),
                    });
                }
                // Points within rounding of a cell boundary may miss every cell.
                best.or_else(|| {
                    let q = p * (1.0 - 1e-9);
                    arc_heights(dirs, lens, &q)
                        .reduce(|a, b| if upper { a.max(b) } else { a.min(b) })
                })
            }
        }
    }

    /// Half-height of the wall over a boundary point of a polygonal shadow.
    fn rim_height(&self, p: &Vec2) -> f64 {
        let v = self.body.vertices().unwrap();
        let m = v.len();
        for k in 0..m {
            let a = v[k];
            let b = v[(k + 1) % m];
            let e = b - a;
            let t = ((p - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
            if (a + e * t - p).norm() < 1e-9 {
                return 0.5 * t * (1.0 - t) * cross(&a, &b);
            }
        }
        0.0
    }
}

/// Heights of all feasible arc combinatorics ending at `p`.
fn arc_heights<'a>(
    dirs: &'a [Vec2],
    lens: &'a [f64],
    p: &'a Vec2,
) -> impl Iterator<Item = f64> + 'a {
    let m = dirs.len();
    (0..m).flat_map(move |i| {
        (1..m - 1).filter_map(move |full| {
            let j = (i + full + 1) % m;
            let mut v = Vec2::zeros();
            let mut sum = 0.0;
            for k in 1..=full {
                let e = (i + k) % m;
                v += dirs[e] * lens[e];
                sum += lens[e];
            }
            let a_mat = Matrix3::new(
                dirs[i].x, v.x, dirs[j].x, //
                dirs[i].y, v.y, dirs[j].y, //
                1.0, sum, 1.0,
            );
            let sol = a_mat.lu().solve(&Vector3::new(p.x, p.y, 1.0))?;
            let (a, t, b) = (sol[0], sol[1], sol[2]);
            let tol = 1e-12;
            if !(t > tol
                && a >= -tol
                && b >= -tol
                && a <= t * lens[i] + tol
                && b <= t * lens[j] + tol)
            {
                return None;
            }
            let mut pt = dirs[i] * a.max(0.0);
            let mut z = 0.0;
            for k in 1..=full {
                let e = (i + k) % m;
                let next = pt + dirs[e] * (t * lens[e]);
                z += 0.5 * cross(&pt, &next);
                pt = next;
            }
            let next = pt + dirs[j] * b.max(0.0);
            z += 0.5 * cross(&pt, &next);
            Some(z)
        })
    })
}

/// Area between a unit-length circular arc and its chord of length `r`.
pub fn disk_height(r: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    // chord(φ) = 2 sin(φ/2)/φ decreases from 1 at φ = 0 to 0 at φ = 2π.
    let chord = |phi: f64| {
        if phi < 1e-8 {
            1.0 - phi * phi / 24.0
        } else {
            2.0 * (0.5 * phi).sin() / phi
        }
    };
    let (mut lo, mut hi) = (0.0_f64, TAU);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chord(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let phi = 0.5 * (lo + hi);
    if phi < 1e-6 {
        return phi / 12.0;
    }
    (phi - phi.sin()) / (2.0 * phi * phi)
}

/// Planar sample grid over the shadow: boundary samples, clustered rings.
pub(crate) fn shadow_grid(q: &ConvexBody, resolution: usize) -> (Vec<Vec2>, Vec<f64>) {
    let boundary: Vec<Vec2> = match q {
        ConvexBody::Disk { radius } => (0..resolution)
            .map(|k| {
                let t = TAU * k as f64 / resolution as f64;
                *radius * Vec2::new(t.cos(), t.sin())
            })
            .collect(),
        ConvexBody::Polygon { vertices } => {
            let v = vertices.vertices();
            let per = resolution.div_ceil(v.len()).max(1);
            (0..v.len())
                .flat_map(|k| {
                    let a = v[k];
                    let b = v[(k + 1) % v.len()];
                    (0..per).map(move |s| a + (b - a) * (s as f64 / per as f64))
                })
                .collect()
        }
    };
    let rings = (resolution / 2).max(4);
    let radii = (1..=rings)
        .map(|j| {
            let u = 1.0 - j as f64 / rings as f64;
            1.0 - u * u
        })
        .collect();
    (boundary, radii)
}

/// Closed triangle mesh of the unit CC-sphere.
pub fn sphere_sample(q: &ConvexBody, resolution: usize) -> Result<TriMesh> {
    sphere_sample_with(q, resolution, Execution::default())
}

pub fn sphere_sample_with(q: &ConvexBody, resolution: usize, exec: Execution) -> Result<TriMesh> {
    const MIN_RES: usize = 16;
    if resolution < MIN_RES {
        return Err(Error::ResolutionTooCoarse(resolution, MIN_RES));
    }
    let prof = SphereProfile::new(q)?;
    let (boundary, radii) = shadow_grid(q, resolution);
    let ns = boundary.len();
    let nr = radii.len();
    let mut planar = vec![Vec2::zeros()];
    for r in &radii {
        planar.extend(boundary.iter().map(|b| b * *r));
    }
    let heights: Vec<(f64, f64)> = exec::map(exec, &planar, |p| {
        let t = prof.top(p).unwrap_or(0.0);
        let b = prof.bottom(p).unwrap_or(0.0);
        (t, b)
    });

    let mut verts: Vec<Vec3> = Vec::with_capacity(2 * planar.len());
    for (p, (t, _)) in planar.iter().zip(&heights) {
        verts.push(Vec3::new(p.x, p.y, *t));
    }
    let top = |j: usize, s: usize| if j == 0 { 0 } else { 1 + (j - 1) * ns + s % ns };
    let mut bottom_index = vec![0usize; planar.len()];
    for (k, (p, (t, b))) in planar.iter().zip(&heights).enumerate() {
        let on_rim = k > (nr - 1) * ns;
        if on_rim && (t - b).abs() <= 1e-15 {
            bottom_index[k] = k;
        } else {
            bottom_index[k] = verts.len();
            verts.push(Vec3::new(p.x, p.y, *b));
        }
    }
    let bot = |j: usize, s: usize| bottom_index[top(j, s)];

    let mut tris = Vec::with_capacity(4 * ns * nr + 2 * ns);
    for s in 0..ns {
        tris.push([top(0, 0), top(1, s), top(1, s + 1)]);
        tris.push([bot(0, 0), bot(1, s + 1), bot(1, s)]);
        for j in 1..nr {
            tris.push([top(j, s), top(j + 1, s), top(j + 1, s + 1)]);
            tris.push([top(j, s), top(j + 1, s + 1), top(j, s + 1)]);
            tris.push([bot(j, s), bot(j + 1, s + 1), bot(j + 1, s)]);
            tris.push([bot(j, s), bot(j, s + 1), bot(j + 1, s + 1)]);
        }
        let (t0, t1, b0, b1) = (top(nr, s), top(nr, s + 1), bot(nr, s), bot(nr, s + 1));
        tris.push([b0, b1, t1]);
        tris.push([b0, t1, t0]);
    }
    let mesh = TriMesh::new(verts, tris)?.without_collapsed();
    if !mesh.is_closed() {
        return Err(Error::ResolutionTooCoarse(resolution, MIN_RES));
    }
    Ok(mesh)
}

/// Sphere of radius `r`, the `δ_r` image of the unit sphere.
pub fn sphere_sample_radius(q: &ConvexBody, r: f64, resolution: usize) -> Result<TriMesh> {
    sphere_sample(q, resolution)?.dilate(r)
}
