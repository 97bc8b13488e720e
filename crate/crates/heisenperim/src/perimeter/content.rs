use serde::{Deserialize, Serialize};

use super::{horizontal_projection, integrand_norm, PerimeterMeasure};
use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum};
use crate::heisenberg::Vec3;
use crate::planar::Vec2;
use crate::quadrature::{integrate, sum_results, QuadOptions, QuadResult};
use crate::surfaces::{GraphSurface, SlabSurface, Surface, TriMesh, Wall};

type Integrand<'a> = &'a (dyn Fn(&Vec2) -> f64 + Sync);

/// Deepest uniform split tried per triangle.
const MAX_MESH_LEVEL: usize = 8;
/// Cap on sub-triangles evaluated in one pass.
const MAX_MESH_NODES: usize = 1 << 27;

/// Content of a mesh with its convergence data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshContent {
    pub value: f64,
    /// Uniform subdivision level of the accepted pass.
    pub level: usize,
    /// Difference between the last two passes.
    pub error_estimate: f64,
    /// Zero-area triangles that were skipped.
    pub degenerate: usize,
    pub converged: bool,
}

fn graph_integral(s: &GraphSurface, h: Integrand, opts: &QuadOptions) -> Result<QuadResult> {
    integrate(&s.domain().cells(), |p| h(&s.projected_normal(p)), opts)
}

/// `∫∫_Ω h(−y/2 − f_x, x/2 − f_y)` for the graph of `f` over `Ω`.
pub fn graph_content(
    m: &PerimeterMeasure,
    s: &GraphSurface,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    graph_integral(s, &|v| integrand_norm(m, v), opts)
}

fn wall_integral(w: &Wall, h: Integrand) -> f64 {
    h(&w.outward_normal()) * w.area()
}

/// Support function at the unit horizontal normal times the wall area.
pub fn wall_content(m: &PerimeterMeasure, w: &Wall) -> f64 {
    wall_integral(w, &|v| integrand_norm(m, v))
}

fn triangle_integral(
    a: &Vec3,
    b: &Vec3,
    c: &Vec3,
    n: &Vec3,
    area: f64,
    level: usize,
    h: Integrand,
) -> f64 {
    let k = 1usize << level;
    let (u, v) = ((b - a) / k as f64, (c - a) / k as f64);
    let mut vals = Vec::with_capacity(k * k);
    for j in 0..k {
        for i in 0..k - j {
            let (fi, fj) = (i as f64, j as f64);
            let up = a + u * (fi + 1.0 / 3.0) + v * (fj + 1.0 / 3.0);
            vals.push(h(&horizontal_projection(&up, n)));
            if i + j + 1 < k {
                let down = a + u * (fi + 2.0 / 3.0) + v * (fj + 2.0 / 3.0);
                vals.push(h(&horizontal_projection(&down, n)));
            }
        }
    }
    pairwise_sum(&vals) * area / (k * k) as f64
}

fn mesh_pass(
    mesh: &TriMesh,
    h: Integrand,
    level: usize,
    opts: &QuadOptions,
) -> Result<(f64, usize)> {
    let parts: Vec<Result<Option<f64>>> = exec::map_range(opts.execution, mesh.len(), |t| {
        let [a, b, c] = mesh.corners(t);
        let cr = (b - a).cross(&(c - a));
        let scale = (b - a)
            .norm_squared()
            .max((c - a).norm_squared())
            .max((c - b).norm_squared());
        let len = cr.norm();
        if !(len > 1e-14 * scale) {
            return Ok(None);
        }
        let v = triangle_integral(&a, &b, &c, &(cr / len), 0.5 * len, level, h);
        if !v.is_finite() {
            let g = (a + b + c) / 3.0;
            return Err(Error::NonFinite(g.x, g.y));
        }
        Ok(Some(v))
    });
    let mut vals = Vec::with_capacity(parts.len());
    let mut degenerate = 0;
    for p in parts {
        match p? {
            Some(v) => vals.push(v),
            None => degenerate += 1,
        }
    }
    Ok((pairwise_sum(&vals), degenerate))
}

/// Mesh integral of `h` at the horizontal projection of the unit normal,
/// refined by uniform 1:4 splits until two passes differ by `rtol`.
pub fn mesh_content_with(mesh: &TriMesh, h: Integrand, opts: &QuadOptions) -> Result<MeshContent> {
    opts.validate()?;
    if let Some(level) = opts.fixed_level {
        let (value, degenerate) = mesh_pass(mesh, h, level, opts)?;
        return Ok(MeshContent {
            value,
            level,
            error_estimate: 0.0,
            degenerate,
            converged: true,
        });
    }
    let (mut prev, degenerate) = mesh_pass(mesh, h, 0, opts)?;
    let mut level = 0;
    loop {
        if level + 1 > MAX_MESH_LEVEL || mesh.len() << (2 * (level + 1)) > MAX_MESH_NODES {
            return Ok(MeshContent {
                value: prev,
                level,
                error_estimate: f64::INFINITY,
                degenerate,
                converged: false,
            });
        }
        level += 1;
        let (next, _) = mesh_pass(mesh, h, level, opts)?;
        let diff = (next - prev).abs();
        if diff <= opts.rtol * next.abs() {
            return Ok(MeshContent {
                value: next,
                level,
                error_estimate: diff,
                degenerate,
                converged: true,
            });
        }
        prev = next;
    }
}

pub fn mesh_content(
    m: &PerimeterMeasure,
    mesh: &TriMesh,
    opts: &QuadOptions,
) -> Result<MeshContent> {
    mesh_content_with(mesh, &|v| integrand_norm(m, v), opts)
}

fn slab_integral(s: &SlabSurface, h: Integrand, opts: &QuadOptions) -> Result<QuadResult> {
    let mut parts = Vec::with_capacity(2 * s.top.len() + 1);
    for p in &s.top {
        for poly in [p.poly, p.poly.scaled(-1.0)] {
            let g = GraphSurface::from_field(poly, p.domain.clone())?;
            parts.push(graph_integral(&g, h, opts)?);
        }
    }
    let walls: Vec<f64> = s.walls.iter().map(|w| wall_integral(w, h)).collect();
    parts.push(QuadResult {
        value: pairwise_sum(&walls),
        error_estimate: 0.0,
        evaluations: walls.len(),
    });
    Ok(sum_results(&parts))
}

/// Top and bottom patch graphs plus the walls.
pub fn slab_content(
    m: &PerimeterMeasure,
    s: &SlabSurface,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    slab_integral(s, &|v| integrand_norm(m, v), opts)
}

fn surface_integral(surface: &Surface, h: Integrand, opts: &QuadOptions) -> Result<QuadResult> {
    match surface {
        Surface::Graph(g) => graph_integral(g, h, opts),
        Surface::Slab(s) => slab_integral(s, h, opts),
        Surface::Mesh(mesh) => {
            let r = mesh_content_with(mesh, h, opts)?;
            if !r.converged {
                return Err(Error::NotConverged(format!(
                    "mesh content stalled at level {} ({} triangles)",
                    r.level,
                    mesh.len()
                )));
            }
            Ok(QuadResult {
                value: r.value,
                error_estimate: r.error_estimate,
                evaluations: mesh.len() << (2 * r.level),
            })
        }
    }
}

/// Content of any supported surface.
pub fn content(m: &PerimeterMeasure, surface: &Surface, opts: &QuadOptions) -> Result<QuadResult> {
    surface_integral(surface, &|v| integrand_norm(m, v), opts)
}

/// Same as [`content`] but with the integrand evaluated as a maximum over one
/// vertex of each antipodal pair.
pub fn polygonal_fast_content(
    m: &PerimeterMeasure,
    surface: &Surface,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let verts = m
        .integrand_body()
        .vertices()
        .ok_or_else(|| Error::InvalidBody("vertex maximum needs a polygonal body".into()))?;
    let half = &verts[..verts.len() / 2];
    let h = |v: &Vec2| half.iter().map(|w| w.dot(v).abs()).fold(0.0, f64::max);
    surface_integral(surface, &h, opts)
}
