use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::content::content;
use super::report::iso_ratio;
use super::PerimeterMeasure;
use crate::error::{Error, Result};
use crate::planar::ConvexBody;
use crate::quadrature::QuadOptions;
use crate::surfaces::Surface;

fn mink(q: &ConvexBody, s: &Surface, opts: &QuadOptions) -> Result<f64> {
    Ok(content(&PerimeterMeasure::minkowski(q), s, opts)?.value)
}

fn anti(q: &ConvexBody, s: &Surface, opts: &QuadOptions) -> Result<f64> {
    Ok(content(&PerimeterMeasure::anti(q)?, s, opts)?.value)
}

/// `(Σ_{rQ}(S), r Σ_Q(S))`.
pub fn scaling_check(
    q: &ConvexBody,
    r: f64,
    s: &Surface,
    opts: &QuadOptions,
) -> Result<(f64, f64)> {
    let scaled = q.scaled(r)?;
    Ok((mink(&scaled, s, opts)?, r * mink(q, s, opts)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub inner: f64,
    pub outer: f64,
    /// `inner ≤ outer` up to the quadrature tolerance.
    pub ordered: bool,
    /// The inner body lies in the interior of the outer one.
    pub strict: bool,
}

/// Contents for `Q1 ⊆ Q2`; the containment is checked first.
pub fn containment_bounds(
    q1: &ConvexBody,
    q2: &ConvexBody,
    s: &Surface,
    opts: &QuadOptions,
) -> Result<ContainmentReport> {
    if !q1.is_subset_of(q2, 1e-12) {
        return Err(Error::InvalidArgument(
            "first body is not contained in the second".into(),
        ));
    }
    let inner = mink(q1, s, opts)?;
    let outer = mink(q2, s, opts)?;
    Ok(ContainmentReport {
        inner,
        outer,
        ordered: inner <= outer * (1.0 + 2.0 * opts.rtol),
        strict: q1.is_interior_to(q2, 1e-12),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub inradius: f64,
    pub circumradius: f64,
    /// Ratio for the unit disk.
    pub iso_disk: f64,
    pub iso_q: f64,
    pub lower: f64,
    pub upper: f64,
    pub anti_iso_q: f64,
    pub anti_lower: f64,
    pub anti_upper: f64,
    pub holds: bool,
    pub anti_holds: bool,
}

fn within(lo: f64, v: f64, hi: f64, rtol: f64) -> bool {
    v >= lo * (1.0 - 2.0 * rtol) && v <= hi * (1.0 + 2.0 * rtol)
}

/// `Iso_D/R ≤ Iso_Q ≤ Iso_D/r` and `r Iso_D ≤ AIso_Q ≤ R Iso_D`.
pub fn sandwich_bounds(q: &ConvexBody, s: &Surface, opts: &QuadOptions) -> Result<SandwichReport> {
    let (r, big_r) = q.in_circum_radii();
    let vol = s.volume(opts)?;
    let iso_disk = iso_ratio(vol, mink(&ConvexBody::unit_disk(), s, opts)?)?;
    let iso_q = iso_ratio(vol, mink(q, s, opts)?)?;
    let anti_iso_q = iso_ratio(vol, anti(q, s, opts)?)?;
    let (lower, upper) = (iso_disk / big_r, iso_disk / r);
    let (anti_lower, anti_upper) = (r * iso_disk, big_r * iso_disk);
    Ok(SandwichReport {
        inradius: r,
        circumradius: big_r,
        iso_disk,
        iso_q,
        lower,
        upper,
        anti_iso_q,
        anti_lower,
        anti_upper,
        holds: within(lower, iso_q, upper, opts.rtol),
        anti_holds: within(anti_lower, anti_iso_q, anti_upper, opts.rtol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongApproxReport {
    pub n: u32,
    /// `1/cos(π/2ⁿ)`.
    pub r_n: f64,
    pub iso_disk: f64,
    pub iso_qn: f64,
    pub anti_iso_qn: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub contains: bool,
}

/// Bracket from the regular `2ⁿ`-gon inscribed in the unit circle.
pub fn strong_approx(n: u32, s: &Surface, opts: &QuadOptions) -> Result<StrongApproxReport> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "polygon exponent {n} outside 2..=20"
        )));
    }
    let qn = ConvexBody::regular_ngon(1 << n)?;
    let r_n = 1.0 / (PI / (1u64 << n) as f64).cos();
    let vol = s.volume(opts)?;
    let iso_disk = iso_ratio(vol, mink(&ConvexBody::unit_disk(), s, opts)?)?;
    let iso_qn = iso_ratio(vol, mink(&qn, s, opts)?)?;
    let anti_iso_qn = iso_ratio(vol, anti(&qn, s, opts)?)?;
    let lower = (iso_qn / r_n).min(anti_iso_qn);
    let upper = iso_qn.max(r_n * anti_iso_qn);
    Ok(StrongApproxReport {
        n,
        r_n,
        iso_disk,
        iso_qn,
        anti_iso_qn,
        lower,
        upper,
        width: upper - lower,
        contains: within(lower, iso_disk, upper, opts.rtol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{build_square_bubble, GraphSurface, PlanarDomain, Quadratic};

    fn flat() -> Surface {
        Surface::Graph(
            GraphSurface::from_field(Quadratic::constant(0.0), PlanarDomain::unit_square())
                .unwrap(),
        )
    }

    #[test]
    fn scaling_examples() {
        let opts = QuadOptions::default();
        let q = ConvexBody::unit_diamond();
        let (a, b) = scaling_check(&q, 2.0, &flat(), &opts).unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-4 && (b - 2.0 / 3.0).abs() < 1e-4);
        let (a, b) = scaling_check(&q, 1.0, &flat(), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn containment_examples() {
        let opts = QuadOptions::default();
        let r = containment_bounds(
            &ConvexBody::unit_diamond(),
            &ConvexBody::unit_square(),
            &flat(),
            &opts,
        )
        .unwrap();
        assert!(r.ordered && !r.strict);
        let small = ConvexBody::unit_diamond().scaled(0.9).unwrap();
        let r = containment_bounds(&small, &ConvexBody::unit_disk(), &flat(), &opts).unwrap();
        assert!(r.ordered && r.strict);
        let same = containment_bounds(
            &ConvexBody::unit_disk(),
            &ConvexBody::unit_disk(),
            &flat(),
            &opts,
        )
        .unwrap();
        assert_eq!(same.inner, same.outer);
        assert!(containment_bounds(
            &ConvexBody::unit_square(),
            &ConvexBody::unit_diamond(),
            &flat(),
            &opts
        )
        .is_err());
    }

    #[test]
    fn radii_of_regular_polygons() {
        assert!((1.0 / (PI / 4.0).cos() - 2f64.sqrt()).abs() < 1e-15);
        assert!((1.0 / (PI / 8.0).cos() - 1.0824).abs() < 1e-4);
    }

    #[test]
    fn sandwich_on_square_bubble() {
        let s = Surface::Slab(build_square_bubble());
        let r = sandwich_bounds(&ConvexBody::unit_diamond(), &s, &QuadOptions::default()).unwrap();
        assert!(r.holds && r.anti_holds, "{r:?}");
        assert!((r.upper / r.iso_disk - 2f64.sqrt()).abs() < 1e-12);
        let d = sandwich_bounds(&ConvexBody::unit_disk(), &s, &QuadOptions::default()).unwrap();
        assert_eq!(d.lower, d.upper);
        assert_eq!(d.iso_q, d.iso_disk);
    }
}
