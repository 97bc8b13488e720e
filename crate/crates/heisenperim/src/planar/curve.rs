use serde::{Deserialize, Serialize};

use super::body::shoelace;
use super::Vec2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Degenerate,
}

/// Polyline with an optional closing segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarCurve {
    samples: Vec<Vec2>,
    closed: bool,
}

impl PlanarCurve {
    pub fn new(samples: Vec<Vec2>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidCurve(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        Ok(PlanarCurve { samples, closed })
    }

    pub fn open(samples: Vec<Vec2>) -> Result<Self> {
        Self::new(samples, false)
    }

    pub fn closed(samples: Vec<Vec2>) -> Result<Self> {
        Self::new(samples, true)
    }

    /// Regular `n`-gon approximation of a circle, counterclockwise.
    pub fn circle(center: Vec2, radius: f64, n: usize) -> Result<Self> {
        let pts = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                center + radius * Vec2::new(t.cos(), t.sin())
            })
            .collect();
        Self::closed(pts)
    }

    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Segment vectors, including the closing one for closed curves.
    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let m = self.samples.len();
        let count = if self.closed { m } else { m - 1 };
        (0..count).map(move |k| (self.samples[k], self.samples[(k + 1) % m]))
    }

    /// Samples in traversal order, with the start repeated at the end if closed.
    pub fn traversal(&self) -> Vec<Vec2> {
        let mut v = self.samples.clone();
        if self.closed {
            v.push(self.samples[0]);
        }
        v
    }

    pub fn euclidean_length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn signed_area(&self) -> Result<f64> {
        if !self.closed {
            return Err(Error::InvalidCurve(
                "enclosed area needs a closed curve".into(),
            ));
        }
        Ok(shoelace(&self.samples))
    }

    pub fn orientation(&self) -> Option<Orientation> {
        let a = self.signed_area().ok()?;
        Some(if a > 0.0 {
            Orientation::CounterClockwise
        } else if a < 0.0 {
            Orientation::Clockwise
        } else {
            Orientation::Degenerate
        })
    }

    pub fn translated(&self, t: Vec2) -> Self {
        PlanarCurve {
            samples: self.samples.iter().map(|p| p + t).collect(),
            closed: self.closed,
        }
    }

    /// Concatenation of two open curves sharing an endpoint.
    pub fn concat(&self, other: &PlanarCurve) -> Result<Self> {
        if self.closed || other.closed {
            return Err(Error::InvalidCurve(
                "concatenation needs open curves".into(),
            ));
        }
        let mut s = self.samples.clone();
        let start = if (other.samples[0] - *s.last().unwrap()).norm() == 0.0 {
            1
        } else {
            0
        };
        s.extend_from_slice(&other.samples[start..]);
        Self::open(s)
    }
}

/// Segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSegment {
    a: Vec2,
    b: Vec2,
}

impl PlanarSegment {
    pub fn new(a: Vec2, b: Vec2) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidCurve("degenerate segment".into()));
        }
        Ok(PlanarSegment { a, b })
    }

    pub fn a(&self) -> Vec2 {
        self.a
    }

    pub fn b(&self) -> Vec2 {
        self.b
    }

    pub fn vector(&self) -> Vec2 {
        self.b - self.a
    }

    pub fn as_curve(&self) -> PlanarCurve {
        PlanarCurve {
            samples: vec![self.a, self.b],
            closed: false,
        }
    }
}
