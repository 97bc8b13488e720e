//! Brute-force content of a graph from the growth of its ε-neighborhood.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum, Execution};
use crate::planar::{ConvexBody, Vec2};
use crate::surfaces::GraphSurface;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Midpoint grid is `grid × grid` over the bounding box of the domain.
    pub grid: usize,
    /// Boundary samples of the body, vertices included.
    pub samples: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            grid: 400,
            samples: 256,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub eps: Vec<f64>,
    /// `(λ(N_ε) − λ(E)) / ε` for each `ε`.
    pub quotients: Vec<f64>,
    /// Polynomial extrapolation of the quotients to `ε = 0`.
    pub extrapolated: f64,
}

/// `{0.1, 0.05, 0.025}` times the domain diameter.
pub fn default_eps(s: &GraphSurface) -> Vec<f64> {
    let d = s.domain().scale();
    vec![0.1 * d, 0.05 * d, 0.025 * d]
}

fn body_samples(q: &ConvexBody, k: usize) -> Vec<Vec2> {
    let mut pts = vec![Vec2::zeros()];
    match q.vertices() {
        Some(v) => {
            let m = v.len();
            let per = k.div_ceil(m).max(1);
            for i in 0..m {
                let (a, b) = (v[i], v[(i + 1) % m]);
                pts.extend((0..per).map(|j| a + (b - a) * (j as f64 / per as f64)));
            }
        }
        None => pts.extend(
            (0..k.max(8))
                .map(|j| q.radial_point(std::f64::consts::TAU * j as f64 / k.max(8) as f64)),
        ),
    }
    pts
}

/// Neville evaluation at zero of the interpolant through `(xs, ys)`.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// Estimates the Minkowski content of the graph of `f` for the metric body `q`
/// from `Z_ε = max_{(a,b) ∈ Q} f(x − εa, y − εb) + (ε/2)(x b − y a)`.
pub fn neighborhood_oracle(
    q: &ConvexBody,
    s: &GraphSurface,
    eps: &[f64],
    opts: &OracleOptions,
) -> Result<OracleEstimate> {
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument("ε values must be positive".into()));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("ε values must decrease".into()));
    }
    if opts.grid < 2 || opts.samples < 4 {
        return Err(Error::InvalidArgument("oracle grid too coarse".into()));
    }
    let samples = body_samples(q, opts.samples);
    let dom = s.domain();
    let (lo, hi) = dom.bbox();
    let n = opts.grid;
    let (hx, hy) = ((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let weight = hx * hy;
    let mut quotients = Vec::with_capacity(eps.len());
    for &e in eps {
        let rows: Vec<Result<f64>> = exec::map_range(opts.execution, n, |j| {
            let y = lo.y + (j as f64 + 0.5) * hy;
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let p = Vec2::new(lo.x + (i as f64 + 0.5) * hx, y);
                if !dom.contains(&p) {
                    continue;
                }
                let f0 = s.value(&p);
                let mut z = f0;
                for a in &samples {
                    let shifted = p - e * a;
                    if !dom.contains(&shifted) {
                        continue;
                    }
                    z = z.max(s.value(&shifted) + 0.5 * e * (p.x * a.y - p.y * a.x));
                }
                if !z.is_finite() {
                    return Err(Error::NonFinite(p.x, p.y));
                }
                row.push((z - f0) * weight);
            }
            Ok(pairwise_sum(&row))
        });
        let rows: Vec<f64> = rows.into_iter().collect::<Result<_>>()?;
        quotients.push(pairwise_sum(&rows) / e);
    }
    Ok(OracleEstimate {
        eps: eps.to_vec(),
        extrapolated: extrapolate_to_zero(eps, &quotients),
        quotients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{PlanarDomain, Quadratic};

    #[test]
    fn neville_is_exact_on_quadratics() {
        let xs = [0.4, 0.2, 0.1];
        let ys = xs.map(|x| 3.0 - 2.0 * x + 5.0 * x * x);
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn flat_square_diamond() {
        let s = GraphSurface::from_field(Quadratic::constant(0.0), PlanarDomain::unit_square())
            .unwrap();
        let opts = OracleOptions {
            grid: 200,
            samples: 64,
            ..Default::default()
        };
        let r =
            neighborhood_oracle(&ConvexBody::unit_diamond(), &s, &default_eps(&s), &opts).unwrap();
        assert!((r.extrapolated - 1.0 / 3.0).abs() < 0.02 / 3.0, "{r:?}");
    }

    #[test]
    fn rejects_bad_schedules() {
        let s = GraphSurface::from_field(Quadratic::constant(0.0), PlanarDomain::unit_square())
            .unwrap();
        let q = ConvexBody::unit_diamond();
        let o = OracleOptions::default();
        assert!(neighborhood_oracle(&q, &s, &[0.1, 0.2], &o).is_err());
        assert!(neighborhood_oracle(&q, &s, &[], &o).is_err());
        assert!(neighborhood_oracle(&q, &s, &[-0.1], &o).is_err());
    }
}
