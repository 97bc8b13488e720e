//! Adaptive midpoint quadrature over parallelogram and triangle cells.
//!
//! Each cell is compared against its four children; cells whose two
//! levels disagree by more than their share of `rtol` are split further.
//! Top-level cells are processed independently and reduced pairwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum, Execution};
use crate::planar::{cross, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// `o + s u + t v` for `s, t ∈ [0, 1]`.
    Parallelogram {
        o: Vec2,
        u: Vec2,
        v: Vec2,
    },
    Triangle([Vec2; 3]),
}

impl Cell {
    pub fn area(&self) -> f64 {
        match self {
            Cell::Parallelogram { u, v, .. } => cross(u, v).abs(),
            Cell::Triangle([a, b, c]) => 0.5 * cross(&(b - a), &(c - a)).abs(),
        }
    }

    pub fn centroid(&self) -> Vec2 {
        match self {
            Cell::Parallelogram { o, u, v } => o + 0.5 * (u + v),
            Cell::Triangle([a, b, c]) => (a + b + c) / 3.0,
        }
    }

    pub fn children(&self) -> [Cell; 4] {
        match *self {
            Cell::Parallelogram { o, u, v } => {
                let (hu, hv) = (0.5 * u, 0.5 * v);
                [
                    Cell::Parallelogram { o, u: hu, v: hv },
                    Cell::Parallelogram {
                        o: o + hu,
                        u: hu,
                        v: hv,
                    },
                    Cell::Parallelogram {
                        o: o + hv,
                        u: hu,
                        v: hv,
                    },
                    Cell::Parallelogram {
                        o: o + hu + hv,
                        u: hu,
                        v: hv,
                    },
                ]
            }
            Cell::Triangle([a, b, c]) => {
                let (ab, bc, ca) = (0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a));
                [
                    Cell::Triangle([a, ab, ca]),
                    Cell::Triangle([ab, b, bc]),
                    Cell::Triangle([ca, bc, c]),
                    Cell::Triangle([ab, bc, ca]),
                ]
            }
        }
    }

    /// Uniform split into `4^level` cells.
    pub fn refine(&self, level: usize) -> Vec<Cell> {
        let mut cells = vec![*self];
        for _ in 0..level {
            cells = cells.iter().flat_map(|c| c.children()).collect();
        }
        cells
    }

    /// Parallelogram split into an `n × n` grid.
    pub fn grid(o: Vec2, u: Vec2, v: Vec2, n: usize) -> Vec<Cell> {
        let (du, dv) = (u / n as f64, v / n as f64);
        let mut cells = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                cells.push(Cell::Parallelogram {
                    o: o + du * i as f64 + dv * j as f64,
                    u: du,
                    v: dv,
                });
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub rtol: f64,
    pub max_depth: usize,
    pub min_depth: usize,
    /// Uniform refinement level instead of adaptive refinement.
    pub fixed_level: Option<usize>,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rtol: 1e-4,
            max_depth: 9,
            min_depth: 1,
            fixed_level: None,
            execution: Execution::default(),
        }
    }
}

impl QuadOptions {
    pub fn with_rtol(rtol: f64) -> Self {
        QuadOptions {
            rtol,
            ..Default::default()
        }
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    pub fn fixed(level: usize) -> Self {
        QuadOptions {
            fixed_level: Some(level),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol <= 0.1) {
            return Err(Error::InvalidArgument(format!(
                "rtol {} outside (0, 0.1]",
                self.rtol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the level-to-level differences of accepted cells; zero for fixed rules.
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

pub(crate) fn sum_results(parts: &[QuadResult]) -> QuadResult {
    let v: Vec<f64> = parts.iter().map(|r| r.value).collect();
    let e: Vec<f64> = parts.iter().map(|r| r.error_estimate).collect();
    QuadResult {
        value: pairwise_sum(&v),
        error_estimate: pairwise_sum(&e),
        evaluations: parts.iter().map(|r| r.evaluations).sum(),
    }
}

fn eval<F: Fn(&Vec2) -> f64>(f: &F, c: &Cell) -> Result<f64> {
    let p = c.centroid();
    let v = f(&p);
    if !v.is_finite() {
        return Err(Error::NonFinite(p.x, p.y));
    }
    Ok(v * c.area())
}

fn refine<F: Fn(&Vec2) -> f64>(
    f: &F,
    cell: &Cell,
    coarse: f64,
    tol: f64,
    depth: usize,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let kids = cell.children();
    let mut vals = [0.0; 4];
    for (v, k) in vals.iter_mut().zip(&kids) {
        *v = eval(f, k)?;
    }
    let fine = vals.iter().sum::<f64>();
    let diff = (fine - coarse).abs();
    if (diff <= tol && depth >= opts.min_depth) || depth >= opts.max_depth {
        return Ok(QuadResult {
            value: fine,
            error_estimate: diff,
            evaluations: 4,
        });
    }
    let mut acc = QuadResult {
        evaluations: 4,
        ..Default::default()
    };
    for (k, v) in kids.iter().zip(vals) {
        acc = acc + refine(f, k, v, 0.25 * tol, depth + 1, opts)?;
    }
    Ok(acc)
}

/// Adaptive integral of `f` over the union of `cells`, or the fixed-level
/// rule when `opts.fixed_level` is set.
pub fn integrate<F>(cells: &[Cell], f: F, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(&Vec2) -> f64 + Sync + Send,
{
    opts.validate()?;
    if let Some(level) = opts.fixed_level {
        let value = integrate_fixed(cells, f, level, opts.execution)?;
        return Ok(QuadResult {
            value,
            error_estimate: 0.0,
            evaluations: cells.len() << (2 * level),
        });
    }
    if cells.is_empty() {
        return Ok(QuadResult::default());
    }
    let coarse: Vec<Result<f64>> = exec::map(opts.execution, cells, |c| eval(&f, c));
    let coarse: Vec<f64> = coarse.into_iter().collect::<Result<_>>()?;
    let total_area: f64 = pairwise_sum(&cells.iter().map(|c| c.area()).collect::<Vec<_>>());
    let scale = pairwise_sum(&coarse.iter().map(|v| v.abs()).collect::<Vec<_>>()).max(1e-300);
    let idx: Vec<usize> = (0..cells.len()).collect();
    let parts: Vec<Result<QuadResult>> = exec::map(opts.execution, &idx, |&k| {
        let tol = opts.rtol * scale * cells[k].area() / total_area;
        let mut r = refine(&f, &cells[k], coarse[k], tol, 1, opts)?;
        r.evaluations += 1;
        Ok(r)
    });
    let parts: Vec<QuadResult> = parts.into_iter().collect::<Result<_>>()?;
    Ok(sum_results(&parts))
}

/// Midpoint rule on each cell refined uniformly `level` times.
pub fn integrate_fixed<F>(cells: &[Cell], f: F, level: usize, exec: Execution) -> Result<f64>
where
    F: Fn(&Vec2) -> f64 + Sync + Send,
{
    let parts: Vec<Result<f64>> = exec::map(exec, cells, |c| {
        let vals: Vec<f64> = c
            .refine(level)
            .iter()
            .map(|k| eval(&f, k))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&vals))
    });
    let parts: Vec<f64> = parts.into_iter().collect::<Result<_>>()?;
    Ok(pairwise_sum(&parts))
}

/// Nodes and weights of [`integrate_fixed`], in the same order.
pub fn fixed_nodes(cells: &[Cell], level: usize) -> Vec<(Vec2, f64)> {
    cells
        .iter()
        .flat_map(|c| {
            c.refine(level)
                .into_iter()
                .map(|k| (k.centroid(), k.area()))
        })
        .collect()
}
