use serde::{Deserialize, Serialize};

use super::path::{lift_path, HorizontalPath};
use crate::error::{Error, Result};
use crate::planar::{isoperimetrix, ConvexBody, PlanarCurve, Vec2};

/// Segments used to polygonize a circular isoperimetrix.
pub const DISK_LOOP_SEGMENTS: usize = 2048;

/// Polygonal unit-area isoperimetrix with a Minkowski-length parameter.
#[derive(Debug, Clone)]
pub struct IsoLoop {
    body: ConvexBody,
    vertices: Vec<Vec2>,
    /// `cum[k]` is the Q-length from vertex 0 to vertex k; `cum[m]` is the total.
    cum: Vec<f64>,
}

impl IsoLoop {
    pub fn new(q: &ConvexBody) -> Result<Self> {
        Self::with_disk_segments(q, DISK_LOOP_SEGMENTS)
    }

    /// For disks the circle is replaced by a regular `segments`-gon of unit area.
    pub fn with_disk_segments(q: &ConvexBody, segments: usize) -> Result<Self> {
        let vertices = match isoperimetrix(q, 1.0)? {
            ConvexBody::Polygon { vertices } => vertices.vertices().to_vec(),
            ConvexBody::Disk { .. } => {
                if segments < 8 {
                    return Err(Error::ResolutionTooCoarse(segments, 8));
                }
                let t = std::f64::consts::TAU / segments as f64;
                let r = (2.0 / (segments as f64 * t.sin())).sqrt();
                (0..segments)
                    .map(|k| r * Vec2::new((k as f64 * t).cos(), (k as f64 * t).sin()))
                    .collect()
            }
        };
        let m = vertices.len();
        let mut cum = Vec::with_capacity(m + 1);
        cum.push(0.0);
        for k in 0..m {
            let e = vertices[(k + 1) % m] - vertices[k];
            cum.push(cum[k] + q.norm(&e));
        }
        Ok(IsoLoop {
            body: q.clone(),
            vertices,
            cum,
        })
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Q-length of the whole loop.
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn wrap(&self, u: f64) -> f64 {
        u.rem_euclid(self.length())
    }

    fn edge_at(&self, u: f64) -> usize {
        let m = self.vertices.len();
        match self.cum.binary_search_by(|c| c.total_cmp(&u)) {
            Ok(k) => k.min(m - 1),
            Err(k) => (k - 1).min(m - 1),
        }
    }

    /// Point at Q-length parameter `u` (taken modulo the loop length).
    pub fn point_at(&self, u: f64) -> Vec2 {
        let u = self.wrap(u);
        let m = self.vertices.len();
        let k = self.edge_at(u);
        let a = self.vertices[k];
        let b = self.vertices[(k + 1) % m];
        let len = self.cum[k + 1] - self.cum[k];
        a + (b - a) * ((u - self.cum[k]) / len)
    }

    /// Parameter of a boundary point, if `p` lies on the loop within `tol`.
    pub fn locate(&self, p: &Vec2, tol: f64) -> Option<f64> {
        let m = self.vertices.len();
        for k in 0..m {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % m];
            let e = b - a;
            let t = ((p - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
            if (a + e * t - p).norm() <= tol {
                return Some(self.cum[k] + t * (self.cum[k + 1] - self.cum[k]));
            }
        }
        None
    }

    /// Polyline following the loop counterclockwise from `u0` for Q-length `span`.
    pub fn arc(&self, u0: f64, span: f64) -> Vec<Vec2> {
        let total = self.length();
        let m = self.vertices.len();
        let u0 = self.wrap(u0);
        let mut pts = vec![self.point_at(u0)];
        let mut k = self.edge_at(u0) + 1;
        let mut covered = self.cum[k] - u0;
        let mut lap = 0.0;
        while covered < span - 1e-15 * total {
            pts.push(self.vertices[k % m]);
            k += 1;
            if k > m {
                k = 1;
                lap += total;
            }
            covered = self.cum[k] + lap - u0;
        }
        if span > 0.0 {
            let end = self.point_at(u0 + span);
            if (end - *pts.last().unwrap()).norm() > 1e-15 {
                pts.push(end);
            } else if pts.len() > 1 {
                *pts.last_mut().unwrap() = end;
            }
        }
        pts
    }
}

/// Subarc of a scaled isoperimetrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicSpec {
    pub body: ConvexBody,
    pub scale: f64,
    pub start: Vec2,
    pub span: f64,
}

impl GeodesicSpec {
    pub fn new(body: ConvexBody, scale: f64, start: Vec2, span: f64) -> Result<Self> {
        let spec = GeodesicSpec {
            body,
            scale,
            start,
            span,
        };
        spec.start_parameter(&IsoLoop::new(&spec.body)?)?;
        Ok(spec)
    }

    fn start_parameter(&self, lp: &IsoLoop) -> Result<f64> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "geodesic scale {}",
                self.scale
            )));
        }
        let full = self.scale * lp.length();
        if !(self.span >= 0.0 && self.span <= full * (1.0 + 1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "span {} outside [0, {full}]",
                self.span
            )));
        }
        lp.locate(&(self.start / self.scale), 1e-9 / self.scale)
            .ok_or_else(|| {
                Error::InvalidArgument("start is not on the scaled isoperimetrix".into())
            })
    }
}

/// Lift of the subarc, translated to start at the origin.
pub fn cc_geodesic(spec: &GeodesicSpec) -> Result<HorizontalPath> {
    let lp = IsoLoop::new(&spec.body)?;
    let u0 = spec.start_parameter(&lp)?;
    let span = (spec.span / spec.scale).min(lp.length());
    let pts: Vec<Vec2> = lp
        .arc(u0, span)
        .into_iter()
        .map(|p| p * spec.scale - spec.start)
        .collect();
    let pts = if pts.len() < 2 {
        vec![pts[0], pts[0]]
    } else {
        pts
    };
    Ok(lift_path(&PlanarCurve::open(pts)?, 0.0))
}

/// Full loops of the unit-area isoperimetrix from `samples` equally spaced
/// start points `s`, translated by `−s` and lifted from the origin.
pub fn bubble_family(q: &ConvexBody, samples: usize) -> Result<Vec<HorizontalPath>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("bubble family needs samples".into()));
    }
    let lp = IsoLoop::new(q)?;
    let total = lp.length();
    (0..samples)
        .map(|j| {
            let u0 = total * j as f64 / samples as f64;
            let s = lp.point_at(u0);
            let pts: Vec<Vec2> = lp.arc(u0, total).into_iter().map(|p| p - s).collect();
            Ok(lift_path(&PlanarCurve::open(pts)?, 0.0))
        })
        .collect()
}
