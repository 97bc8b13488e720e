//! Triangulated bubble sets: the union of all full isoperimetrix loops
//! through the origin.

use std::f64::consts::TAU;

use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::heisenberg::{IsoLoop, Vec3};
use crate::planar::{cross, isoperimetrix, ConvexBody, Vec2};

/// Smallest accepted resolution.
pub const MIN_BUBBLE_RES: usize = 16;

/// Closed mesh of the bubble set with unit-area isoperimetrix, centered so
/// that it is symmetric under `z ↦ −z`.
///
/// Vertex `(i, k)` is the point reached after `k` grid steps along the loop
/// started at grid point `i`. For polygons the grid contains the vertices.
pub fn build_q_bubble_mesh(q: &ConvexBody, resolution: usize) -> Result<TriMesh> {
    if resolution < MIN_BUBBLE_RES {
        return Err(Error::ResolutionTooCoarse(resolution, MIN_BUBBLE_RES));
    }
    let (m, pts, disk_radius) = match isoperimetrix(q, 1.0)? {
        ConvexBody::Disk { radius } => {
            let step = TAU / resolution as f64;
            let pts = (0..resolution)
                .map(|i| radius * Vec2::new((i as f64 * step).cos(), (i as f64 * step).sin()))
                .collect::<Vec<_>>();
            (resolution, pts, Some(radius))
        }
        ConvexBody::Polygon { .. } => {
            let w = IsoLoop::new(q)?.vertices().to_vec();
            let sides = w.len();
            let per = resolution.div_ceil(sides);
            let pts = (0..sides * per)
                .map(|i| {
                    let (k, r) = (i / per, i % per);
                    w[k] + (w[(k + 1) % sides] - w[k]) * (r as f64 / per as f64)
                })
                .collect::<Vec<_>>();
            (sides * per, pts, None)
        }
    };
    let mut verts = vec![Vec3::new(0.0, 0.0, -0.5), Vec3::new(0.0, 0.0, 0.5)];
    let id = |i: usize, k: usize| -> usize {
        match k {
            0 => 0,
            k if k == m => 1,
            k => 2 + (i % m) * (m - 1) + (k - 1),
        }
    };
    for i in 0..m {
        let s = pts[i];
        let mut swept = 0.0;
        for k in 1..m {
            let e = pts[(i + k) % m];
            let d = e - s;
            let z = match disk_radius {
                Some(r) => {
                    let phi = TAU * k as f64 / m as f64;
                    0.5 * r * r * (phi - phi.sin())
                }
                None => {
                    swept += 0.5 * cross(&(pts[(i + k - 1) % m] - s), &d);
                    swept
                }
            };
            verts.push(Vec3::new(d.x, d.y, z - 0.5));
        }
    }
    let mut tris = Vec::with_capacity(2 * m * m);
    for i in 0..m {
        for k in 0..m {
            tris.push([id(i, k), id(i + 1, k), id(i, k + 1)]);
            tris.push([id(i + 1, k), id(i + 1, k + 1), id(i, k + 1)]);
        }
    }
    let mut mesh = TriMesh::new(verts, tris)?.without_collapsed();
    if !mesh.is_closed() {
        return Err(Error::OpenMesh(mesh.defect_edges()));
    }
    if mesh.volume()? < 0.0 {
        let flipped: Vec<[usize; 3]> = mesh
            .triangles()
            .iter()
            .map(|t| [t[0], t[2], t[1]])
            .collect();
        mesh = TriMesh::new(mesh.vertices().to_vec(), flipped)?;
    }
    Ok(mesh)
}
