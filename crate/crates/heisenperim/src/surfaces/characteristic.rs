//! Characteristic points: where the tangent plane is horizontal.

use super::graph::GraphSurface;
use super::mesh::TriMesh;
use crate::heisenberg::Vec3;
use crate::planar::Vec2;

/// Grid points of an `n × n` sampling of the domain bounding box where the
/// projected normal `(−y/2 − f_x, x/2 − f_y)` is shorter than `tol`.
pub fn characteristic_points_graph(s: &GraphSurface, n: usize, tol: f64) -> Vec<Vec3> {
    let (lo, hi) = s.domain().bbox();
    let n = n.max(2);
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let p = lo
                + Vec2::new(
                    (hi.x - lo.x) * i as f64 / (n - 1) as f64,
                    (hi.y - lo.y) * j as f64 / (n - 1) as f64,
                );
            if s.domain().contains(&p) && s.projected_normal(&p).norm() < tol {
                out.push(Vec3::new(p.x, p.y, s.value(&p)));
            }
        }
    }
    out
}

/// Centroids of triangles whose unit normal has horizontal part below `tol`.
pub fn characteristic_points_mesh(m: &TriMesh, tol: f64) -> Vec<Vec3> {
    (0..m.len())
        .filter_map(|t| {
            let [a, b, c] = m.corners(t);
            let n = (b - a).cross(&(c - a));
            let len = n.norm();
            if len == 0.0 {
                return None;
            }
            let g = (a + b + c) / 3.0;
            let h = Vec2::new(n.x - 0.5 * g.y * n.z, n.y + 0.5 * g.x * n.z);
            (h.norm() / len < tol).then_some(g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{PlanarDomain, Quadratic};

    #[test]
    fn horizontal_plane_has_one_characteristic_point() {
        let s = GraphSurface::from_field(
            Quadratic::constant(0.3),
            PlanarDomain::rect(-1.0, 1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let pts = characteristic_points_graph(&s, 21, 1e-9);
        assert_eq!(pts.len(), 1);
        assert!(pts[0].xy().norm() < 1e-12);
    }

    #[test]
    fn saddle_xy_over_two_is_characteristic_free_off_axis() {
        // z = xy/2 gives (−y/2 − y/2, x/2 − x/2) = (−y, 0): the whole x-axis.
        let s = GraphSurface::from_field(
            Quadratic([0.0, 0.0, 0.0, 0.0, 0.5, 0.0]),
            PlanarDomain::rect(-1.0, 1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let pts = characteristic_points_graph(&s, 21, 1e-9);
        assert_eq!(pts.len(), 21);
        assert!(pts.iter().all(|p| p.y.abs() < 1e-12));
    }

    #[test]
    fn vertical_wall_has_none() {
        let m = TriMesh::cuboid(Vec3::new(0.5, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0));
        let pts = characteristic_points_mesh(&m, 1e-6);
        assert!(pts.iter().all(|p| p.z.abs() == 1.0));
    }
}
