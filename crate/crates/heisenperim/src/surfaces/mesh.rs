use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::heisenberg::Vec3;

/// Triangle mesh with per-triangle unit normals from the winding order.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Vec3>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(Error::InvalidSurface(format!(
                "triangle {t:?} out of range"
            )));
        }
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidSurface("non-finite vertex".into()));
        }
        let normals = triangles
            .iter()
            .map(|t| {
                let c = (vertices[t[1]] - vertices[t[0]]).cross(&(vertices[t[2]] - vertices[t[0]]));
                let l = c.norm();
                if l > 0.0 {
                    c / l
                } else {
                    Vec3::zeros()
                }
            })
            .collect();
        Ok(TriMesh {
            vertices,
            triangles,
            normals,
        })
    }

    /// Axis-aligned box `[lo, hi]`, outward oriented.
    pub fn cuboid(lo: Vec3, hi: Vec3) -> Self {
        let v: Vec<Vec3> = (0..8)
            .map(|i| {
                Vec3::new(
                    if i & 1 == 0 { lo.x } else { hi.x },
                    if i & 2 == 0 { lo.y } else { hi.y },
                    if i & 4 == 0 { lo.z } else { hi.z },
                )
            })
            .collect();
        let quads = [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ];
        let tris = quads
            .iter()
            .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
            .collect();
        TriMesh::new(v, tris).expect("cuboid")
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn area(&self) -> f64 {
        let a: Vec<f64> = (0..self.len()).map(|t| self.triangle_area(t)).collect();
        crate::exec::pairwise_sum(&a)
    }

    /// Number of directed edges lacking a unique opposite partner.
    pub fn defect_edges(&self) -> usize {
        let mut count: HashMap<(usize, usize), i32> = HashMap::with_capacity(3 * self.len());
        for t in &self.triangles {
            for k in 0..3 {
                *count.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        count
            .iter()
            .filter(|(&(a, b), &c)| c != 1 || count.get(&(b, a)).copied() != Some(1))
            .count()
    }

    /// Every edge shared by exactly two consistently oriented triangles.
    pub fn is_closed(&self) -> bool {
        !self.is_empty() && self.defect_edges() == 0
    }

    /// Enclosed volume by the divergence theorem.
    pub fn volume(&self) -> Result<f64> {
        let bad = self.defect_edges();
        if bad > 0 || self.is_empty() {
            return Err(Error::OpenMesh(bad));
        }
        let parts: Vec<f64> = (0..self.len())
            .map(|t| {
                let [a, b, c] = self.corners(t);
                a.dot(&b.cross(&c)) / 6.0
            })
            .collect();
        Ok(crate::exec::pairwise_sum(&parts))
    }

    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> TriMesh {
        TriMesh::new(
            self.vertices.iter().map(f).collect(),
            self.triangles.clone(),
        )
        .expect("map")
    }

    /// Image under the Heisenberg dilation `(sx, sy, s²z)`.
    pub fn dilate(&self, s: f64) -> Result<TriMesh> {
        crate::heisenberg::check_scale(s)?;
        Ok(self.map_vertices(|v| Vec3::new(s * v.x, s * v.y, s * s * v.z)))
    }

    pub fn translate(&self, t: Vec3) -> TriMesh {
        self.map_vertices(|v| v + t)
    }

    /// Reflection `z ↦ −z`, with winding flipped to stay outward.
    pub fn reflect_z(&self) -> TriMesh {
        let v = self
            .vertices
            .iter()
            .map(|p| Vec3::new(p.x, p.y, -p.z))
            .collect();
        let t = self.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect();
        TriMesh::new(v, t).expect("reflect")
    }

    /// Exchange of x and y, with winding flipped.
    pub fn swap_xy(&self) -> TriMesh {
        let v = self
            .vertices
            .iter()
            .map(|p| Vec3::new(p.y, p.x, p.z))
            .collect();
        let t = self.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect();
        TriMesh::new(v, t).expect("swap")
    }

    /// Drops triangles that repeat a vertex index.
    pub fn without_collapsed(&self) -> TriMesh {
        let t = self
            .triangles
            .iter()
            .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            .copied()
            .collect();
        TriMesh::new(self.vertices.clone(), t).expect("filter")
    }

    /// Merges vertices closer than `tol` (grid hashing) and drops collapsed triangles.
    pub fn welded(&self, tol: f64) -> TriMesh {
        let key = |v: &Vec3| {
            (
                (v.x / tol).round() as i64,
                (v.y / tol).round() as i64,
                (v.z / tol).round() as i64,
            )
        };
        let mut map: HashMap<(i64, i64, i64), usize> = HashMap::new();
        let mut verts = Vec::new();
        let mut remap = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let k = key(v);
            let idx = *map.entry(k).or_insert_with(|| {
                verts.push(*v);
                verts.len() - 1
            });
            remap.push(idx);
        }
        let tris = self
            .triangles
            .iter()
            .map(|t| [remap[t[0]], remap[t[1]], remap[t[2]]])
            .collect();
        TriMesh::new(verts, tris).expect("weld").without_collapsed()
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::with_capacity(40 * (self.vertices.len() + self.len()));
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }

    pub fn write_obj(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_obj().as_bytes())?;
        Ok(())
    }

    /// Parses `v` and `f` records; polygonal faces are fan-triangulated.
    pub fn from_obj(text: &str) -> Result<TriMesh> {
        let mut verts = Vec::new();
        let mut tris = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let mut it = line.split_whitespace();
            let bad = |m: &str| Error::Parse {
                pos: ln + 1,
                msg: m.to_string(),
            };
            match it.next() {
                Some("v") => {
                    let c: Vec<f64> = it
                        .take(3)
                        .map(|s| s.parse::<f64>().map_err(|_| bad("bad coordinate")))
                        .collect::<Result<_>>()?;
                    if c.len() != 3 {
                        return Err(bad("vertex needs 3 coordinates"));
                    }
                    verts.push(Vec3::new(c[0], c[1], c[2]));
                }
                Some("f") => {
                    let idx: Vec<usize> = it
                        .map(|s| {
                            let head = s.split('/').next().unwrap_or("");
                            let i: i64 = head.parse().map_err(|_| bad("bad face index"))?;
                            let n = verts.len() as i64;
                            let j = if i < 0 { n + i } else { i - 1 };
                            if j < 0 {
                                return Err(bad("face index out of range"));
                            }
                            Ok(j as usize)
                        })
                        .collect::<Result<_>>()?;
                    if idx.len() < 3 {
                        return Err(bad("face needs 3 vertices"));
                    }
                    for k in 1..idx.len() - 1 {
                        tris.push([idx[0], idx[k], idx[k + 1]]);
                    }
                }
                _ => {}
            }
        }
        TriMesh::new(verts, tris)
    }

    /// Vertices as "x,y,z" lines.
    pub fn points_csv(&self) -> String {
        let mut s = String::from("x,y,z\n");
        for v in &self.vertices {
            let _ = writeln!(s, "{},{},{}", v.x, v.y, v.z);
        }
        s
    }

    /// Midpoint subdivision of every triangle into four.
    pub fn subdivide(&self) -> TriMesh {
        let mut verts = self.vertices.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            let k = (a.min(b), a.max(b));
            *mids.entry(k).or_insert_with(|| {
                verts.push(0.5 * (verts[a] + verts[b]));
                verts.len() - 1
            })
        };
        let mut tris = Vec::with_capacity(4 * self.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            tris.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        TriMesh::new(verts, tris).expect("subdivide")
    }

    /// Concatenation without welding.
    pub fn merged(&self, other: &TriMesh) -> TriMesh {
        let off = self.vertices.len();
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        let mut t = self.triangles.clone();
        t.extend(
            other
                .triangles
                .iter()
                .map(|t| [t[0] + off, t[1] + off, t[2] + off]),
        );
        TriMesh::new(v, t).expect("merge")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_volume_and_closure() {
        let c = TriMesh::cuboid(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0));
        assert!(c.is_closed());
        assert!((c.volume().unwrap() - 1.0).abs() < 1e-15);
        assert!((c.area() - 6.0).abs() < 1e-15);
        let d = c.dilate(2.0).unwrap();
        assert!((d.volume().unwrap() - 16.0).abs() < 1e-12);
        let s = c.subdivide();
        assert!(s.is_closed());
        assert_eq!(s.len(), 48);
        assert!((s.volume().unwrap() - 1.0).abs() < 1e-14);
        assert!((c.reflect_z().volume().unwrap() - 1.0).abs() < 1e-15);
        assert!((c.swap_xy().volume().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn open_mesh_rejected() {
        let c = TriMesh::cuboid(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0));
        let open = TriMesh::new(c.vertices().to_vec(), c.triangles()[1..].to_vec()).unwrap();
        assert!(!open.is_closed());
        assert!(matches!(open.volume(), Err(Error::OpenMesh(_))));
    }

    #[test]
    fn outward_normals() {
        let c = TriMesh::cuboid(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0));
        for t in 0..c.len() {
            let [a, b, cc] = c.corners(t);
            let centroid = (a + b + cc) / 3.0;
            assert!(c.normals()[t].dot(&centroid) > 0.0);
        }
    }

    #[test]
    fn obj_roundtrip() {
        let c = TriMesh::cuboid(Vec3::zeros(), Vec3::new(1.0, 2.0, 3.0));
        let back = TriMesh::from_obj(&c.to_obj()).unwrap();
        assert_eq!(back, c);
        let quad =
            TriMesh::from_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2 3/3 4/4\n").unwrap();
        assert_eq!(quad.len(), 2);
        assert!(TriMesh::from_obj("v 0 0\n").is_err());
        assert!(TriMesh::from_obj("v 0 0 0\nf 1 2 3\n").is_err());
    }

    #[test]
    fn welding_merges_duplicates() {
        let c = TriMesh::cuboid(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0));
        let split: Vec<Vec3> = c
            .triangles()
            .iter()
            .flat_map(|t| t.map(|i| c.vertices()[i]))
            .collect();
        let tris = (0..c.len())
            .map(|k| [3 * k, 3 * k + 1, 3 * k + 2])
            .collect();
        let soup = TriMesh::new(split, tris).unwrap();
        assert!(!soup.is_closed());
        let w = soup.welded(1e-9);
        assert!(w.is_closed());
        assert_eq!(w.vertices().len(), 8);
    }
}
