//! Minkowski and anti-Minkowski content of surfaces.
//!
//! Both measures integrate a support function of the horizontal projection
//! `(n_x − (y/2) n_z, n_y + (x/2) n_z)` of the surface normal. The anti
//! variant is the Minkowski content of the polar dual body.

mod bounds;
mod content;
mod oracle;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bounds::{
    containment_bounds, sandwich_bounds, scaling_check, strong_approx, ContainmentReport,
    SandwichReport, StrongApproxReport,
};
pub use content::{
    content, graph_content, mesh_content, mesh_content_with, polygonal_fast_content, slab_content,
    wall_content, MeshContent,
};
pub use oracle::{default_eps, neighborhood_oracle, OracleEstimate, OracleOptions};
pub use report::{iso_ratio, iso_report, IsoReport};

use crate::error::{Error, Result};
use crate::planar::{ConvexBody, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Minkowski,
    AntiMinkowski,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Minkowski => "minkowski",
            Variant::AntiMinkowski => "anti_minkowski",
        })
    }
}

/// Perimeter measure relative to the metric body `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureSpec", into = "MeasureSpec")]
pub struct PerimeterMeasure {
    body: ConvexBody,
    variant: Variant,
    /// Body whose support function is the integrand.
    integrand_body: ConvexBody,
}

#[derive(Serialize, Deserialize)]
struct MeasureSpec {
    body: ConvexBody,
    variant: Variant,
}

impl TryFrom<MeasureSpec> for PerimeterMeasure {
    type Error = Error;
    fn try_from(s: MeasureSpec) -> Result<Self> {
        PerimeterMeasure::new(s.body, s.variant)
    }
}

impl From<PerimeterMeasure> for MeasureSpec {
    fn from(m: PerimeterMeasure) -> Self {
        MeasureSpec {
            body: m.body,
            variant: m.variant,
        }
    }
}

impl PerimeterMeasure {
    pub fn new(body: ConvexBody, variant: Variant) -> Result<Self> {
        let integrand_body = match variant {
            Variant::Minkowski => body.clone(),
            Variant::AntiMinkowski => body.polar_dual()?,
        };
        Ok(PerimeterMeasure {
            body,
            variant,
            integrand_body,
        })
    }

    pub fn minkowski(body: &ConvexBody) -> Self {
        Self::new(body.clone(), Variant::Minkowski).expect("valid body")
    }

    pub fn anti(body: &ConvexBody) -> Result<Self> {
        Self::new(body.clone(), Variant::AntiMinkowski)
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn integrand_body(&self) -> &ConvexBody {
        &self.integrand_body
    }

    /// The same measure for the body `r Q`.
    pub fn rescaled(&self, r: f64) -> Result<Self> {
        Self::new(self.body.scaled(r)?, self.variant)
    }
}

/// Support function of the integrand body at `v`.
pub fn integrand_norm(m: &PerimeterMeasure, v: &Vec2) -> f64 {
    m.integrand_body.dual_norm(v)
}

/// `(n_x − (y/2) n_z, n_y + (x/2) n_z)` at the point `p`.
pub fn horizontal_projection(p: &crate::heisenberg::Vec3, n: &crate::heisenberg::Vec3) -> Vec2 {
    Vec2::new(n.x - 0.5 * p.y * n.z, n.y + 0.5 * p.x * n.z)
}

/// Density of the content against the sub-Riemannian content at a point
/// with projected normal `n0`.
pub fn rn_density(q: &ConvexBody, n0: &Vec2) -> Result<f64> {
    let len = n0.norm();
    if !(len > 1e-14) {
        return Err(Error::Characteristic);
    }
    Ok(q.dual_norm(n0) / len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn integrand_examples() {
        let sq = ConvexBody::unit_square();
        let v = Vec2::new(0.3, -1.7);
        let m = PerimeterMeasure::minkowski(&sq);
        assert!((integrand_norm(&m, &v) - 2.0).abs() < 1e-15);
        let a = PerimeterMeasure::anti(&sq).unwrap();
        let (x, y) = (v.x.abs(), v.y.abs());
        assert!((integrand_norm(&a, &v) - 0.5 * (x + y + (x - y).abs())).abs() < 1e-15);
        let d = ConvexBody::unit_disk();
        for m in [
            PerimeterMeasure::minkowski(&d),
            PerimeterMeasure::anti(&d).unwrap(),
        ] {
            assert!((integrand_norm(&m, &Vec2::new(3.0, 4.0)) - 5.0).abs() < 1e-14);
        }
    }

    #[test]
    fn density_examples() {
        let dia = ConvexBody::unit_diamond();
        assert!(
            (rn_density(&ConvexBody::unit_disk(), &Vec2::new(-2.0, 0.7)).unwrap() - 1.0).abs()
                < 1e-15
        );
        assert!((rn_density(&dia, &Vec2::new(3.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((rn_density(&dia, &Vec2::new(2.0, 2.0)).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(matches!(
            rn_density(&dia, &Vec2::zeros()),
            Err(Error::Characteristic)
        ));
    }

    #[test]
    fn measure_json_roundtrip() {
        let m = PerimeterMeasure::anti(&ConvexBody::regular_ngon(6).unwrap()).unwrap();
        let j = serde_json::to_string(&m).unwrap();
        let back: PerimeterMeasure = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m);
    }
}
