//! Level sets `F = 0` meshed on a regular grid.
//!
//! Each grid cube is split into six tetrahedra along its main diagonal and
//! the zero set is linearly interpolated on tetrahedron edges. Neighbouring
//! cubes split their shared faces the same way, so the result is watertight
//! whenever the level set stays inside the box.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::heisenberg::Vec3;

type F3 = Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;
type G3 = Arc<dyn Fn(&Vec3) -> Vec3 + Send + Sync>;

/// Surface `F = 0` inside an axis-aligned box; `F < 0` is the inside.
#[derive(Clone)]
pub struct ImplicitSurface {
    f: F3,
    grad: G3,
    lo: Vec3,
    hi: Vec3,
}

impl fmt::Debug for ImplicitSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitSurface")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}

/// Mesh of a level set with the count of triangles where `∇F` vanished.
#[derive(Debug, Clone)]
pub struct ImplicitMesh {
    pub mesh: TriMesh,
    pub singular: usize,
}

const TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

impl ImplicitSurface {
    pub fn new(
        f: impl Fn(&Vec3) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&Vec3) -> Vec3 + Send + Sync + 'static,
        lo: Vec3,
        hi: Vec3,
    ) -> Result<Self> {
        if !(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z) {
            return Err(Error::InvalidSurface("empty box".into()));
        }
        Ok(ImplicitSurface {
            f: Arc::new(f),
            grad: Arc::new(grad),
            lo,
            hi,
        })
    }

    /// Euclidean sphere of radius `r` about `c`.
    pub fn sphere(c: Vec3, r: f64) -> Result<Self> {
        let pad = Vec3::new(1.1 * r, 1.1 * r, 1.1 * r);
        Self::new(
            move |p| (p - c).norm_squared() - r * r,
            move |p| 2.0 * (p - c),
            c - pad,
            c + pad,
        )
    }

    pub fn value(&self, p: &Vec3) -> f64 {
        (self.f)(p)
    }

    pub fn gradient(&self, p: &Vec3) -> Vec3 {
        (self.grad)(p)
    }

    pub fn mesh(&self, cell: f64) -> Result<ImplicitMesh> {
        self.mesh_with(cell, Execution::default())
    }

    pub fn mesh_with(&self, cell: f64, exec: Execution) -> Result<ImplicitMesh> {
        if !(cell > 0.0 && cell.is_finite()) {
            return Err(Error::InvalidArgument(format!("cell size {cell}")));
        }
        let ext = self.hi - self.lo;
        let n = [
            (ext.x / cell).ceil().max(1.0) as usize,
            (ext.y / cell).ceil().max(1.0) as usize,
            (ext.z / cell).ceil().max(1.0) as usize,
        ];
        if n.iter().product::<usize>() > 50_000_000 {
            return Err(Error::InvalidArgument(format!("grid {n:?} too large")));
        }
        let h = Vec3::new(
            ext.x / n[0] as f64,
            ext.y / n[1] as f64,
            ext.z / n[2] as f64,
        );
        let (sx, sy) = (n[0] + 1, n[1] + 1);
        let pos = |i: usize, j: usize, k: usize| {
            self.lo + Vec3::new(i as f64 * h.x, j as f64 * h.y, k as f64 * h.z)
        };
        let slabs: Vec<Vec<f64>> = exec::map_range(exec, n[2] + 1, |k| {
            let mut v = Vec::with_capacity(sx * sy);
            for j in 0..sy {
                for i in 0..sx {
                    v.push((self.f)(&pos(i, j, k)));
                }
            }
            v
        });
        let val = |g: usize| {
            let k = g / (sx * sy);
            slabs[k][g % (sx * sy)]
        };
        let gid = |i: usize, j: usize, k: usize| i + sx * (j + sy * k);
        let gpos = |g: usize| {
            let k = g / (sx * sy);
            let r = g % (sx * sy);
            pos(r % sx, r / sx, k)
        };

        let mut verts: Vec<Vec3> = Vec::new();
        let mut edge_vertex: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tris: Vec<[usize; 3]> = Vec::new();
        let mut cut = |a: usize, b: usize, verts: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *edge_vertex.entry(key).or_insert_with(|| {
                let (fa, fb) = (val(key.0), val(key.1));
                let t = fa / (fa - fb);
                verts.push(gpos(key.0) + (gpos(key.1) - gpos(key.0)) * t);
                verts.len() - 1
            })
        };

        for k in 0..n[2] {
            for j in 0..n[1] {
                for i in 0..n[0] {
                    let corner: [usize; 8] = std::array::from_fn(|c| {
                        gid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))
                    });
                    for tet in TETS {
                        let g = tet.map(|c| corner[c]);
                        let inside: Vec<usize> =
                            g.iter().copied().filter(|&v| val(v) < 0.0).collect();
                        let outside: Vec<usize> =
                            g.iter().copied().filter(|&v| val(v) >= 0.0).collect();
                        let new_tris: Vec<[usize; 3]> = match inside.len() {
                            1 => vec![[
                                cut(inside[0], outside[0], &mut verts),
                                cut(inside[0], outside[1], &mut verts),
                                cut(inside[0], outside[2], &mut verts),
                            ]],
                            3 => vec![[
                                cut(outside[0], inside[0], &mut verts),
                                cut(outside[0], inside[1], &mut verts),
                                cut(outside[0], inside[2], &mut verts),
                            ]],
                            2 => {
                                let a = cut(inside[0], outside[0], &mut verts);
                                let b = cut(inside[0], outside[1], &mut verts);
                                let c = cut(inside[1], outside[1], &mut verts);
                                let d = cut(inside[1], outside[0], &mut verts);
                                vec![[a, b, c], [a, c, d]]
                            }
                            _ => vec![],
                        };
                        if new_tris.is_empty() {
                            continue;
                        }
                        let cin =
                            inside.iter().map(|&v| gpos(v)).sum::<Vec3>() / inside.len() as f64;
                        let cout =
                            outside.iter().map(|&v| gpos(v)).sum::<Vec3>() / outside.len() as f64;
                        let dir = cout - cin;
                        for mut t in new_tris {
                            let nrm =
                                (verts[t[1]] - verts[t[0]]).cross(&(verts[t[2]] - verts[t[0]]));
                            if nrm.dot(&dir) < 0.0 {
                                t.swap(1, 2);
                            }
                            tris.push(t);
                        }
                    }
                }
            }
        }
        let mesh = TriMesh::new(verts, tris)?.without_collapsed();
        let singular = (0..mesh.len())
            .filter(|&t| {
                let [a, b, c] = mesh.corners(t);
                (self.grad)(&((a + b + c) / 3.0)).norm() < 1e-12
            })
            .count();
        Ok(ImplicitMesh { mesh, singular })
    }
}
