use serde::{Deserialize, Serialize};

use super::content::content;
use super::PerimeterMeasure;
use crate::error::{Error, Result};
use crate::planar::ConvexBody;
use crate::quadrature::QuadOptions;
use crate::surfaces::Surface;

/// `volume^{3/4} / perimeter`.
pub fn iso_ratio(volume: f64, perimeter: f64) -> Result<f64> {
    if !(perimeter > 0.0 && perimeter.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "perimeter {perimeter} must be positive"
        )));
    }
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "volume {volume} must be positive"
        )));
    }
    Ok(volume.powf(0.75) / perimeter)
}

/// Volume and both perimeters of one surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub surface: String,
    pub body: String,
    pub resolution: Option<usize>,
    pub rtol: f64,
    pub volume: f64,
    pub perimeter_mink: f64,
    pub perimeter_anti: f64,
    pub ratio_mink: f64,
    pub ratio_anti: f64,
    pub error_mink: f64,
    pub error_anti: f64,
}

pub(crate) fn body_label(q: &ConvexBody) -> String {
    match q {
        ConvexBody::Disk { radius } => format!("disk({radius})"),
        ConvexBody::Polygon { vertices } => format!("polygon({})", vertices.vertices().len()),
    }
}

impl IsoReport {
    pub const CSV_HEADER: [&'static str; 11] = [
        "surface",
        "body",
        "resolution",
        "rtol",
        "volume",
        "mink",
        "anti",
        "ratio_mink",
        "ratio_anti",
        "error_mink",
        "error_anti",
    ];

    pub fn with_labels(mut self, surface: impl Into<String>, body: impl Into<String>) -> Self {
        self.surface = surface.into();
        self.body = body.into();
        self
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = Some(resolution);
        self
    }

    fn record(&self) -> [String; 11] {
        [
            self.surface.clone(),
            self.body.clone(),
            self.resolution.map(|r| r.to_string()).unwrap_or_default(),
            self.rtol.to_string(),
            self.volume.to_string(),
            self.perimeter_mink.to_string(),
            self.perimeter_anti.to_string(),
            self.ratio_mink.to_string(),
            self.ratio_anti.to_string(),
            self.error_mink.to_string(),
            self.error_anti.to_string(),
        ]
    }

    /// Header line plus one row per report.
    pub fn to_csv(reports: &[IsoReport]) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(Self::CSV_HEADER).map_err(io)?;
        for r in reports {
            w.write_record(r.record()).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn csv_row(&self) -> Result<String> {
        let all = Self::to_csv(std::slice::from_ref(self))?;
        Ok(all.lines().nth(1).unwrap_or_default().to_string())
    }
}

/// Volume, Minkowski and anti-Minkowski content and both ratios for body `q`.
pub fn iso_report(q: &ConvexBody, surface: &Surface, opts: &QuadOptions) -> Result<IsoReport> {
    let volume = surface.volume(opts)?;
    let mink = content(&PerimeterMeasure::minkowski(q), surface, opts)?;
    let anti = content(&PerimeterMeasure::anti(q)?, surface, opts)?;
    Ok(IsoReport {
        surface: surface.kind().to_string(),
        body: body_label(q),
        resolution: None,
        rtol: opts.rtol,
        volume,
        perimeter_mink: mink.value,
        perimeter_anti: anti.value,
        ratio_mink: iso_ratio(volume, mink.value)?,
        ratio_anti: iso_ratio(volume, anti.value)?,
        error_mink: mink.error_estimate,
        error_anti: anti.error_estimate,
    })
}
