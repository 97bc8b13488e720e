use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::planar::{cross, ConvexBody, Vec2};
use crate::surfaces::GraphSurface;

pub const DEFAULT_LOCI_GRID: usize = 512;

/// Zero set of `⟨E, A⟩` for one edge direction `E` of the body, where `A` is
/// the projected normal of the graph, restricted to where `D²f[E, E] ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchingLocus {
    pub generator: Vec2,
    pub polylines: Vec<Vec<Vec2>>,
}

impl SwitchingLocus {
    pub fn points(&self) -> impl Iterator<Item = &Vec2> {
        self.polylines.iter().flatten()
    }

    /// Best line through the origin: unit direction and largest distance of
    /// a locus point from it.
    pub fn line_fit(&self) -> Option<(Vec2, f64)> {
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for p in self.points() {
            sxx += p.x * p.x;
            sxy += p.x * p.y;
            syy += p.y * p.y;
        }
        if sxx + syy == 0.0 {
            return None;
        }
        let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        let u = Vec2::new(theta.cos(), theta.sin());
        let dist = self
            .points()
            .map(|p| cross(&u, p).abs())
            .fold(0.0, f64::max);
        Some((u, dist))
    }

    /// Largest `|⟨E, A⟩| / |E|` over the locus points.
    pub fn residual(&self, s: &GraphSurface) -> f64 {
        let e = self.generator / self.generator.norm();
        self.points()
            .map(|p| e.dot(&s.projected_normal(p)).abs())
            .fold(0.0, f64::max)
    }
}

fn second_derivative(s: &GraphSurface, p: &Vec2, e: &Vec2) -> f64 {
    match s.field().hessian(p) {
        Some([fxx, fxy, fyy]) => e.x * e.x * fxx + 2.0 * e.x * e.y * fxy + e.y * e.y * fyy,
        None => {
            let h = 1e-5 * s.domain().scale();
            (s.gradient(&(p + h * e)) - s.gradient(&(p - h * e))).dot(e) / (2.0 * h)
        }
    }
}

struct Grid {
    n: usize,
    lo: Vec2,
    step: Vec2,
}

impl Grid {
    fn node(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            self.lo.x + i as f64 * self.step.x,
            self.lo.y + j as f64 * self.step.y,
        )
    }

    fn index(&self, i: usize, j: usize) -> usize {
        j * (self.n + 1) + i
    }
}

fn trace(s: &GraphSurface, e: Vec2, grid: &Grid, values: &[f64], valid: &[bool]) -> Vec<Vec<Vec2>> {
    let n = grid.n;
    let curv_tol = 1e-9;
    let mut crossing: HashMap<usize, Vec2> = HashMap::new();
    let mut point_on = |key: usize, a: (usize, usize), b: (usize, usize)| -> Vec2 {
        *crossing.entry(key).or_insert_with(|| {
            let (ga, gb) = (values[grid.index(a.0, a.1)], values[grid.index(b.0, b.1)]);
            let t = ga / (ga - gb);
            let (pa, pb) = (grid.node(a.0, a.1), grid.node(b.0, b.1));
            pa + (pb - pa) * t
        })
    };
    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            if corners.iter().any(|c| !valid[grid.index(c.0, c.1)]) {
                continue;
            }
            let g = corners.map(|c| values[grid.index(c.0, c.1)]);
            let pos = g.map(|v| v >= 0.0);
            // Edges: bottom, right, top, left.
            let keys = [
                2 * grid.index(i, j),
                2 * grid.index(i + 1, j) + 1,
                2 * grid.index(i, j + 1),
                2 * grid.index(i, j) + 1,
            ];
            let ends = [(0, 1), (1, 2), (3, 2), (0, 3)];
            let cut: Vec<usize> = (0..4)
                .filter(|&k| pos[ends[k].0] != pos[ends[k].1])
                .collect();
            let pairs: Vec<(usize, usize)> = match cut.len() {
                2 => vec![(cut[0], cut[1])],
                4 => {
                    let center = 0.25 * (g[0] + g[1] + g[2] + g[3]) >= 0.0;
                    if center == pos[0] {
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => continue,
            };
            for (a, b) in pairs {
                let ends_a = ends[a];
                let ends_b = ends[b];
                let pa = point_on(keys[a], corners[ends_a.0], corners[ends_a.1]);
                let pb = point_on(keys[b], corners[ends_b.0], corners[ends_b.1]);
                if second_derivative(s, &(0.5 * (pa + pb)), &e).abs() > curv_tol {
                    segments.push([keys[a], keys[b]]);
                }
            }
        }
    }
    let mut by_key: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, seg) in segments.iter().enumerate() {
        for key in seg {
            by_key.entry(*key).or_default().push(k);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut chain = vec![segments[start][0], segments[start][1]];
        for forward in [true, false] {
            loop {
                let tip = if forward {
                    *chain.last().unwrap()
                } else {
                    chain[0]
                };
                let next = by_key[&tip].iter().copied().find(|&k| !used[k]);
                let Some(k) = next else { break };
                used[k] = true;
                let other = if segments[k][0] == tip {
                    segments[k][1]
                } else {
                    segments[k][0]
                };
                if forward {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        lines.push(chain.iter().map(|k| crossing[k]).collect());
    }
    lines
}

/// Switching loci of the Minkowski content for the polygonal body `q`,
/// traced by marching squares on a `grid × grid` lattice over the domain.
pub fn switching_loci(
    q: &ConvexBody,
    s: &GraphSurface,
    grid: usize,
) -> Result<Vec<SwitchingLocus>> {
    let poly = q
        .as_polygon()
        .ok_or_else(|| Error::InvalidBody("switching loci need a polygonal body".into()))?;
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid {grid} too coarse")));
    }
    let (lo, hi) = s.domain().bbox();
    let lattice = Grid {
        n: grid,
        lo,
        step: (hi - lo) / grid as f64,
    };
    let nodes: Vec<Vec2> = (0..=grid)
        .flat_map(|j| (0..=grid).map(move |i| (i, j)))
        .map(|(i, j)| lattice.node(i, j))
        .collect();
    let valid: Vec<bool> = nodes.iter().map(|p| s.domain().contains(p)).collect();
    let normals: Vec<Vec2> = nodes.iter().map(|p| s.projected_normal(p)).collect();
    let gens: Vec<Vec2> = (0..poly.half_count()).map(|k| poly.edge(k)).collect();
    Ok(exec::map(Execution::default(), &gens, |e| {
        let u = e / e.norm();
        let values: Vec<f64> = normals.iter().map(|a| u.dot(a)).collect();
        SwitchingLocus {
            generator: *e,
            polylines: trace(s, u, &lattice, &values, &valid),
        }
    }))
}

/// One row per locus point: `locus,a,b,polyline,x,y`.
pub fn loci_csv(loci: &[SwitchingLocus]) -> Result<String> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["locus", "a", "b", "polyline", "x", "y"])
        .map_err(io)?;
    for (k, l) in loci.iter().enumerate() {
        for (m, line) in l.polylines.iter().enumerate() {
            for p in line {
                w.write_record([
                    k.to_string(),
                    l.generator.x.to_string(),
                    l.generator.y.to_string(),
                    m.to_string(),
                    p.x.to_string(),
                    p.y.to_string(),
                ])
                .map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
