use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::Vec2;

pub type Vec3 = nalgebra::Vector3<f64>;

/// Point of the Heisenberg group in exponential coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HPoint {
    pub const IDENTITY: HPoint = HPoint {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        HPoint { x, y, z }
    }

    pub fn planar(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn to_vec3(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn from_vec3(v: &Vec3) -> Self {
        HPoint::new(v.x, v.y, v.z)
    }

    pub fn inverse(&self) -> Self {
        HPoint::new(-self.x, -self.y, -self.z)
    }

    pub fn dist_euclid(&self, o: &HPoint) -> f64 {
        (self.to_vec3() - o.to_vec3()).norm()
    }
}

impl Mul for HPoint {
    type Output = HPoint;
    fn mul(self, q: HPoint) -> HPoint {
        group_mul(&self, &q)
    }
}

/// `(x1+x2, y1+y2, z1+z2 + (x1 y2 − x2 y1)/2)`.
pub fn group_mul(p: &HPoint, q: &HPoint) -> HPoint {
    HPoint::new(
        p.x + q.x,
        p.y + q.y,
        p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y),
    )
}

/// Anisotropic dilation `(sx, sy, s²z)`.
pub fn dilate(s: f64, p: &HPoint) -> Result<HPoint> {
    check_scale(s)?;
    Ok(HPoint::new(s * p.x, s * p.y, s * s * p.z))
}

pub(crate) fn check_scale(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("dilation factor {s}")))
    }
}

/// Horizontal frame at `p`: `X = ∂x − (y/2)∂z`, `Y = ∂y + (x/2)∂z`.
pub fn frame(p: &HPoint) -> (Vec3, Vec3) {
    (
        Vec3::new(1.0, 0.0, -0.5 * p.y),
        Vec3::new(0.0, 1.0, 0.5 * p.x),
    )
}
