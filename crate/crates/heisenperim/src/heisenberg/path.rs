use serde::{Deserialize, Serialize};

use super::group::{group_mul, HPoint};
use crate::planar::{cross, PlanarCurve};

/// Admissible polyline: a planar curve and the heights of its lift.
///
/// `heights[k]` belongs to the k-th point of `planar.traversal()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizontalPath {
    planar: PlanarCurve,
    heights: Vec<f64>,
}

/// Lift with `z' = (x y' − y x')/2`, exact on each segment.
pub fn lift_path(curve: &PlanarCurve, z0: f64) -> HorizontalPath {
    let pts = curve.traversal();
    let mut heights = Vec::with_capacity(pts.len());
    let mut z = z0;
    heights.push(z);
    for w in pts.windows(2) {
        z += 0.5 * cross(&w[0], &w[1]);
        heights.push(z);
    }
    HorizontalPath {
        planar: curve.clone(),
        heights,
    }
}

impl HorizontalPath {
    pub fn planar(&self) -> &PlanarCurve {
        &self.planar
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn z0(&self) -> f64 {
        self.heights[0]
    }

    pub fn points(&self) -> Vec<HPoint> {
        self.planar
            .traversal()
            .iter()
            .zip(&self.heights)
            .map(|(p, z)| HPoint::new(p.x, p.y, *z))
            .collect()
    }

    pub fn start(&self) -> HPoint {
        let p = self.planar.samples()[0];
        HPoint::new(p.x, p.y, self.heights[0])
    }

    pub fn end(&self) -> HPoint {
        let pts = self.planar.traversal();
        let p = pts[pts.len() - 1];
        HPoint::new(p.x, p.y, *self.heights.last().unwrap())
    }

    /// Largest per-step violation of the lift equation.
    pub fn max_residual(&self) -> f64 {
        let pts = self.planar.traversal();
        pts.windows(2)
            .zip(self.heights.windows(2))
            .map(|(p, z)| ((z[1] - z[0]) - 0.5 * cross(&p[0], &p[1])).abs())
            .fold(0.0, f64::max)
    }

    /// Left translate by `g`; the result is again admissible.
    pub fn left_translate(&self, g: &HPoint) -> HorizontalPath {
        let moved: Vec<HPoint> = self.points().iter().map(|p| group_mul(g, p)).collect();
        let mut samples: Vec<_> = moved.iter().map(|p| p.planar()).collect();
        if self.planar.is_closed() {
            samples.pop();
        }
        HorizontalPath {
            planar: PlanarCurve::new(samples, self.planar.is_closed()).expect("translate"),
            heights: moved.iter().map(|p| p.z).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::vec2;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let sq = PlanarCurve::closed(vec![
            vec2(0.0, 0.0),
            vec2(1.0, 0.0),
            vec2(1.0, 1.0),
            vec2(0.0, 1.0),
        ])
        .unwrap();
        let p = lift_path(&sq, 0.0);
        assert_eq!(p.end(), HPoint::new(0.0, 0.0, 1.0));
        assert_eq!(p.max_residual(), 0.0);

        let c = PlanarCurve::circle(vec2(1.0, 0.0), 1.0, 20_000).unwrap();
        let shifted = c.translated(-c.samples()[0]);
        let lc = lift_path(&shifted, 0.0);
        assert!((lc.end().z - PI).abs() < 1e-7);

        let ray =
            PlanarCurve::open(vec![vec2(-1.0, -2.0), vec2(0.0, 0.0), vec2(0.5, 1.0)]).unwrap();
        assert!(lift_path(&ray, 0.0)
            .heights()
            .iter()
            .all(|z| z.abs() < 1e-15));
    }

    #[test]
    fn translation_preserves_admissibility() {
        let c = PlanarCurve::open(vec![
            vec2(0.0, 0.0),
            vec2(1.0, 0.3),
            vec2(0.2, 1.4),
            vec2(-0.5, 0.1),
        ])
        .unwrap();
        let p = lift_path(&c, 0.25);
        let t = p.left_translate(&HPoint::new(2.0, -1.0, 0.7));
        assert!(t.max_residual() < 1e-12);
        assert_eq!(t.start(), HPoint::new(2.0, -1.0, 0.7) * p.start());
    }
}
