//! The four reference surfaces for the unit diamond, their isoperimetric
//! ratios, and a suite of test surfaces for the bound and scaling checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::sphere_sample;
use crate::perimeter::{iso_report, IsoReport};
use crate::planar::ConvexBody;
use crate::quadrature::QuadOptions;
use crate::surfaces::{
    build_polygonal_bubble, build_q_bubble_mesh, build_square_bubble, GraphSurface, PlanarDomain,
    Quadratic, Surface,
};

pub const DEFAULT_RESOLUTION: usize = 256;

/// `3^{3/4} / (4√π)`.
pub fn pansu_constant() -> f64 {
    3f64.powf(0.75) / (4.0 * std::f64::consts::PI.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceSurface {
    CcBall,
    SquareBubble,
    DualBubble,
    PansuBubble,
}

impl ReferenceSurface {
    pub const ALL: [ReferenceSurface; 4] = [
        ReferenceSurface::CcBall,
        ReferenceSurface::SquareBubble,
        ReferenceSurface::DualBubble,
        ReferenceSurface::PansuBubble,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ReferenceSurface::CcBall => "cc-ball",
            ReferenceSurface::SquareBubble => "square-bubble",
            ReferenceSurface::DualBubble => "dual-bubble",
            ReferenceSurface::PansuBubble => "pansu-bubble",
        }
    }

    /// Expected `(minkowski, anti)` ratios for the unit diamond.
    pub fn expected(self) -> (f64, f64) {
        match self {
            ReferenceSurface::CcBall => (0.308626, 0.154422),
            ReferenceSurface::SquareBubble => (0.284938, 0.379918),
            ReferenceSurface::DualBubble => (0.268642, 0.228175),
            ReferenceSurface::PansuBubble => (0.357117, 0.50504),
        }
    }

    /// Relative tolerance: tighter for the exact slab surfaces.
    pub fn tolerance(self) -> f64 {
        match self {
            ReferenceSurface::SquareBubble | ReferenceSurface::DualBubble => 0.005,
            ReferenceSurface::CcBall | ReferenceSurface::PansuBubble => 0.01,
        }
    }

    pub fn build(self, resolution: usize) -> Result<Surface> {
        let diamond = ConvexBody::unit_diamond();
        Ok(match self {
            ReferenceSurface::CcBall => Surface::Mesh(sphere_sample(&diamond, resolution)?),
            ReferenceSurface::SquareBubble => Surface::Slab(build_square_bubble()),
            ReferenceSurface::DualBubble => {
                Surface::Slab(build_polygonal_bubble(&diamond.polar_dual()?)?)
            }
            ReferenceSurface::PansuBubble => {
                Surface::Mesh(build_q_bubble_mesh(&ConvexBody::unit_disk(), resolution)?)
            }
        })
    }
}

impl fmt::Display for ReferenceSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ReferenceSurface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown reference surface {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub surface: ReferenceSurface,
    pub report: IsoReport,
    pub expected_mink: f64,
    pub expected_anti: f64,
    pub tolerance: f64,
    pub pass_mink: bool,
    pub pass_anti: bool,
}

impl ReferenceRow {
    pub fn rel_error_mink(&self) -> f64 {
        (self.report.ratio_mink - self.expected_mink).abs() / self.expected_mink
    }

    pub fn rel_error_anti(&self) -> f64 {
        (self.report.ratio_anti - self.expected_anti).abs() / self.expected_anti
    }

    pub fn passes(&self) -> bool {
        self.pass_mink && self.pass_anti
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
    /// The Pansu row beats every other row, tolerances included.
    pub pansu_maximal_mink: bool,
    pub pansu_maximal_anti: bool,
}

impl ReferenceTable {
    pub fn row(&self, s: ReferenceSurface) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.surface == s)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(ReferenceRow::passes)
            && self.pansu_maximal_mink
            && self.pansu_maximal_anti
    }

    /// One line per row plus a verdict line.
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "surface",
            "resolution",
            "rtol",
            "volume",
            "mink",
            "anti",
            "ratio_mink",
            "ratio_anti",
            "expected_mink",
            "expected_anti",
            "tolerance",
            "pass_mink",
            "pass_anti",
        ])
        .map_err(io)?;
        for r in &self.rows {
            let p = &r.report;
            w.write_record([
                r.surface.label().to_string(),
                p.resolution.map(|x| x.to_string()).unwrap_or_default(),
                p.rtol.to_string(),
                p.volume.to_string(),
                p.perimeter_mink.to_string(),
                p.perimeter_anti.to_string(),
                p.ratio_mink.to_string(),
                p.ratio_anti.to_string(),
                r.expected_mink.to_string(),
                r.expected_anti.to_string(),
                r.tolerance.to_string(),
                r.pass_mink.to_string(),
                r.pass_anti.to_string(),
            ])
            .map_err(io)?;
        }
        w.write_record([
            "pansu-maximal".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            self.pansu_maximal_mink.to_string(),
            self.pansu_maximal_anti.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ])
        .map_err(io)?;
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn reference_row(
    s: ReferenceSurface,
    resolution: usize,
    opts: &QuadOptions,
) -> Result<ReferenceRow> {
    let surface = s.build(resolution)?;
    let mut report =
        iso_report(&ConvexBody::unit_diamond(), &surface, opts)?.with_labels(s.label(), "diamond");
    if matches!(surface, Surface::Mesh(_)) {
        report = report.with_resolution(resolution);
    }
    let (em, ea) = s.expected();
    let tol = s.tolerance();
    Ok(ReferenceRow {
        surface: s,
        pass_mink: (report.ratio_mink - em).abs() <= tol * em,
        pass_anti: (report.ratio_anti - ea).abs() <= tol * ea,
        report,
        expected_mink: em,
        expected_anti: ea,
        tolerance: tol,
    })
}

pub fn reference_table(resolution: usize, opts: &QuadOptions) -> Result<ReferenceTable> {
    let rows = ReferenceSurface::ALL
        .into_iter()
        .map(|s| reference_row(s, resolution, opts))
        .collect::<Result<Vec<_>>>()?;
    let pansu = rows
        .iter()
        .find(|r| r.surface == ReferenceSurface::PansuBubble)
        .expect("pansu row");
    let beats = |ratio: fn(&IsoReport) -> f64| {
        rows.iter()
            .filter(|r| r.surface != ReferenceSurface::PansuBubble)
            .all(|r| {
                ratio(&pansu.report) * (1.0 - pansu.tolerance)
                    > ratio(&r.report) * (1.0 + r.tolerance)
            })
    };
    Ok(ReferenceTable {
        pansu_maximal_mink: beats(|r| r.ratio_mink),
        pansu_maximal_anti: beats(|r| r.ratio_anti),
        rows,
    })
}

/// Graphs with positive volume under them, the two exact slabs and two
/// meshed closed surfaces.
pub fn test_surfaces(resolution: usize) -> Result<Vec<(String, Surface)>> {
    let sq = PlanarDomain::rect(-1.0, 1.0, -1.0, 1.0)?;
    let graph = |c: [f64; 6]| -> Result<Surface> {
        Ok(Surface::Graph(GraphSurface::from_field(
            Quadratic(c),
            sq.clone(),
        )?))
    };
    let diamond = ConvexBody::unit_diamond();
    Ok(vec![
        ("constant".into(), graph([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])?),
        ("plane".into(), graph([1.0, 0.3, -0.2, 0.0, 0.0, 0.0])?),
        ("paraboloid".into(), graph([1.0, 0.0, 0.0, 0.5, 0.0, 0.25])?),
        ("saddle".into(), graph([1.0, 0.1, 0.0, 0.0, 0.6, 0.0])?),
        ("square-bubble".into(), Surface::Slab(build_square_bubble())),
        (
            "hexagon-bubble".into(),
            Surface::Slab(build_polygonal_bubble(&ConvexBody::regular_ngon(6)?)?),
        ),
        (
            "cc-ball".into(),
            Surface::Mesh(sphere_sample(&diamond, resolution)?),
        ),
        (
            "pansu-bubble".into(),
            Surface::Mesh(build_q_bubble_mesh(&ConvexBody::unit_disk(), resolution)?),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pansu_constant_value() {
        assert!((pansu_constant() - 0.321519).abs() < 1e-6);
    }

    #[test]
    fn labels_roundtrip() {
        for s in ReferenceSurface::ALL {
            assert_eq!(s.label().parse::<ReferenceSurface>().unwrap(), s);
        }
        assert!("ball".parse::<ReferenceSurface>().is_err());
    }

    #[test]
    fn slab_rows_are_exact() {
        let opts = QuadOptions::default();
        let r = reference_row(ReferenceSurface::SquareBubble, 32, &opts).unwrap();
        assert!(r.pass_mink, "{r:?}");
        assert!(r.report.resolution.is_none());
    }
}
