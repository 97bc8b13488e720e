//! First variation of perimeter under compactly supported bumps, and the
//! switching loci carrying the mean curvature of polygonal measures.

mod loci;

use serde::{Deserialize, Serialize};

pub use loci::{loci_csv, switching_loci, SwitchingLocus, DEFAULT_LOCI_GRID};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::perimeter::{integrand_norm, PerimeterMeasure};
use crate::planar::{ConvexBody, Vec2};
use crate::quadrature::{integrate, integrate_fixed, Cell, QuadOptions, QuadResult};
use crate::surfaces::{GraphSurface, Hessian, PlanarDomain, ScalarField2};

/// `A exp(1 − 1/(1 − |p − c|²/ρ²))` inside the disk of radius `ρ`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Vec2,
    pub radius: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: Vec2, radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump radius {radius}, amplitude {amplitude}"
            )));
        }
        Ok(Bump {
            center,
            radius,
            amplitude,
        })
    }

    /// Checks that the bump vanishes on the boundary of `d`.
    pub fn check_support(&self, d: &PlanarDomain) -> Result<()> {
        for p in d.boundary_samples(256) {
            if self.value(&p).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "bump does not vanish on the boundary at ({:.4}, {:.4})",
                    p.x, p.y
                )));
            }
        }
        if !d.contains(&self.center) {
            return Err(Error::InvalidArgument(
                "bump center outside the domain".into(),
            ));
        }
        Ok(())
    }

    fn parts(&self, p: &Vec2) -> Option<(Vec2, f64, f64)> {
        let d = p - self.center;
        let s = d.norm_squared() / (self.radius * self.radius);
        if s >= 1.0 {
            return None;
        }
        let g = (1.0 - 1.0 / (1.0 - s)).exp();
        Some((d, s, g))
    }
}

impl ScalarField2 for Bump {
    fn value(&self, p: &Vec2) -> f64 {
        self.parts(p).map_or(0.0, |(_, _, g)| self.amplitude * g)
    }

    fn gradient(&self, p: &Vec2) -> Vec2 {
        match self.parts(p) {
            None => Vec2::zeros(),
            Some((d, s, g)) => {
                let dg = -g / ((1.0 - s) * (1.0 - s));
                d * (self.amplitude * dg * 2.0 / (self.radius * self.radius))
            }
        }
    }

    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        Some(match self.parts(p) {
            None => [0.0; 3],
            Some((d, s, g)) => {
                let r2 = self.radius * self.radius;
                let w = 1.0 - s;
                let dg = -g / (w * w);
                let ddg = g * (2.0 * s - 1.0) / (w * w * w * w);
                let k = 4.0 * ddg / (r2 * r2);
                let diag = 2.0 * dg / r2;
                [
                    self.amplitude * (k * d.x * d.x + diag),
                    self.amplitude * k * d.x * d.y,
                    self.amplitude * (k * d.y * d.y + diag),
                ]
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationOptions {
    /// Uniform refinement level of the domain cells; the node set stays fixed.
    pub level: usize,
    /// Relative agreement required between successive step halvings.
    pub rtol: f64,
    /// Smallest step tried.
    pub min_step: f64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for VariationOptions {
    fn default() -> Self {
        VariationOptions {
            level: 4,
            rtol: 1e-5,
            min_step: 1e-12,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    pub value: f64,
    /// Step of the accepted difference quotient.
    pub step: f64,
    /// Change between the last two quotients.
    pub change: f64,
    /// Content of the unperturbed surface on the same nodes.
    pub content: f64,
    pub halvings: usize,
}

fn fixed_content(
    m: &PerimeterMeasure,
    s: &GraphSurface,
    bump: &Bump,
    t: f64,
    opts: &VariationOptions,
) -> Result<f64> {
    integrate_fixed(
        &s.domain().cells(),
        |p| {
            let g = s.gradient(p) + t * bump.gradient(p);
            integrand_norm(m, &Vec2::new(-0.5 * p.y - g.x, 0.5 * p.x - g.y))
        },
        opts.level,
        opts.execution,
    )
}

/// `d/dt μ(f + t φ)` at `t = 0` by central differences on a fixed node set,
/// halving the step until two quotients agree to `rtol`.
pub fn first_variation(
    m: &PerimeterMeasure,
    s: &GraphSurface,
    bump: &Bump,
    step: f64,
    opts: &VariationOptions,
) -> Result<VariationResult> {
    bump.check_support(s.domain())?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {step}")));
    }
    let base = fixed_content(m, s, bump, 0.0, opts)?;
    let quotient = |h: f64| -> Result<f64> {
        Ok(
            (fixed_content(m, s, bump, h, opts)? - fixed_content(m, s, bump, -h, opts)?)
                / (2.0 * h),
        )
    };
    let mut h = step;
    let mut prev = quotient(h)?;
    let mut halvings = 0;
    while h / 2.0 >= opts.min_step {
        h /= 2.0;
        halvings += 1;
        let next = quotient(h)?;
        let change = (next - prev).abs();
        if change <= opts.rtol * next.abs().max(base) {
            return Ok(VariationResult {
                value: next,
                step: h,
                change,
                content: base,
                halvings,
            });
        }
        prev = next;
    }
    Err(Error::NotConverged(format!(
        "first variation did not settle down to step {h:e}"
    )))
}

/// Maximizer of `⟨v, a⟩` over the integrand body.
fn argmax_point(body: &ConvexBody, a: &Vec2) -> Vec2 {
    match body {
        ConvexBody::Disk { radius } => {
            let n = a.norm();
            if n == 0.0 {
                Vec2::zeros()
            } else {
                a * (radius / n)
            }
        }
        ConvexBody::Polygon { vertices } => *vertices
            .vertices()
            .iter()
            .max_by(|u, v| u.dot(a).total_cmp(&v.dot(a)))
            .expect("nonempty polygon"),
    }
}

/// `−∫∫ ⟨v*(A), ∇φ⟩` where `v*` maximizes the integrand at `A`: the
/// derivative of the content wherever the maximizer is locally constant.
pub fn linearized_variation(
    m: &PerimeterMeasure,
    s: &GraphSurface,
    bump: &Bump,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    bump.check_support(s.domain())?;
    let body = m.integrand_body();
    let r = bump.radius;
    let support = Cell::Parallelogram {
        o: bump.center - Vec2::new(r, r),
        u: Vec2::new(2.0 * r, 0.0),
        v: Vec2::new(0.0, 2.0 * r),
    };
    integrate(
        &[support],
        |p| {
            let g = bump.gradient(p);
            if g == Vec2::zeros() {
                return 0.0;
            }
            -argmax_point(body, &s.projected_normal(p)).dot(&g)
        },
        opts,
    )
}

/// Closed forms for the square and diamond bodies:
/// `|A₁| + |A₂|` or `½(|A₁| + |A₂| + ||A₁| − |A₂||)`.
pub fn linf_simplified_content(
    m: &PerimeterMeasure,
    s: &GraphSurface,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let body = m.integrand_body();
    let sum_form = if body.approx_eq(&ConvexBody::unit_square(), 1e-12) {
        true
    } else if body.approx_eq(&ConvexBody::unit_diamond(), 1e-12) {
        false
    } else {
        return Err(Error::InvalidBody(
            "simplified integrand needs the unit square or diamond".into(),
        ));
    };
    integrate(
        &s.domain().cells(),
        |p| {
            let a = s.projected_normal(p);
            let (u, v) = (a.x.abs(), a.y.abs());
            if sum_form {
                u + v
            } else {
                0.5 * (u + v + (u - v).abs())
            }
        },
        opts,
    )
}
