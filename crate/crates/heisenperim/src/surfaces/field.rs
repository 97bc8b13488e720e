use std::fmt;
use std::sync::Arc;

use crate::planar::Vec2;

/// Second derivatives `(f_xx, f_xy, f_yy)`.
pub type Hessian = [f64; 3];

/// Scalar field on the plane with its gradient.
pub trait ScalarField2: Send + Sync + fmt::Debug {
    fn value(&self, p: &Vec2) -> f64;
    fn gradient(&self, p: &Vec2) -> Vec2;
    fn hessian(&self, _p: &Vec2) -> Option<Hessian> {
        None
    }
}

pub type Field = Arc<dyn ScalarField2>;

/// `c0 + c1 x + c2 y + c3 x² + c4 xy + c5 y²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Quadratic(pub [f64; 6]);

impl Quadratic {
    pub fn constant(c: f64) -> Self {
        Quadratic([c, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn plane(c: f64, kx: f64, ky: f64) -> Self {
        Quadratic([c, kx, ky, 0.0, 0.0, 0.0])
    }

    pub fn eval(&self, p: &Vec2) -> f64 {
        let c = &self.0;
        c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y
    }

    pub fn grad(&self, p: &Vec2) -> Vec2 {
        let c = &self.0;
        Vec2::new(
            c[1] + 2.0 * c[3] * p.x + c[4] * p.y,
            c[2] + c[4] * p.x + 2.0 * c[5] * p.y,
        )
    }

    pub fn scaled(&self, s: f64) -> Self {
        Quadratic(self.0.map(|c| s * c))
    }

    /// Exact interpolant through six nodes; `None` if they are unisolvent-degenerate.
    pub fn fit(nodes: &[Vec2; 6], values: &[f64; 6]) -> Option<Self> {
        let mut a = nalgebra::SMatrix::<f64, 6, 6>::zeros();
        for (r, p) in nodes.iter().enumerate() {
            let row = [1.0, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y];
            for (c, v) in row.iter().enumerate() {
                a[(r, c)] = *v;
            }
        }
        let b = nalgebra::SVector::<f64, 6>::from_column_slice(values);
        let x = a.full_piv_lu().solve(&b)?;
        Some(Quadratic([x[0], x[1], x[2], x[3], x[4], x[5]]))
    }
}

impl ScalarField2 for Quadratic {
    fn value(&self, p: &Vec2) -> f64 {
        self.eval(p)
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        self.grad(p)
    }
    fn hessian(&self, _p: &Vec2) -> Option<Hessian> {
        Some([2.0 * self.0[3], self.0[4], 2.0 * self.0[5]])
    }
}

type F = Arc<dyn Fn(&Vec2) -> f64 + Send + Sync>;
type G = Arc<dyn Fn(&Vec2) -> Vec2 + Send + Sync>;
type H = Arc<dyn Fn(&Vec2) -> Hessian + Send + Sync>;

/// Field built from closures.
#[derive(Clone)]
pub struct FnField {
    f: F,
    g: G,
    h: Option<H>,
}

impl FnField {
    pub fn new(
        f: impl Fn(&Vec2) -> f64 + Send + Sync + 'static,
        g: impl Fn(&Vec2) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        FnField {
            f: Arc::new(f),
            g: Arc::new(g),
            h: None,
        }
    }

    pub fn with_hessian(mut self, h: impl Fn(&Vec2) -> Hessian + Send + Sync + 'static) -> Self {
        self.h = Some(Arc::new(h));
        self
    }
}

impl fmt::Debug for FnField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnField")
            .field("hessian", &self.h.is_some())
            .finish()
    }
}

impl ScalarField2 for FnField {
    fn value(&self, p: &Vec2) -> f64 {
        (self.f)(p)
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        (self.g)(p)
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        self.h.as_ref().map(|h| h(p))
    }
}

/// `base + t · bump`.
#[derive(Debug, Clone)]
pub struct Perturbed {
    pub base: Field,
    pub bump: Field,
    pub t: f64,
}

impl ScalarField2 for Perturbed {
    fn value(&self, p: &Vec2) -> f64 {
        self.base.value(p) + self.t * self.bump.value(p)
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        self.base.gradient(p) + self.t * self.bump.gradient(p)
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        let a = self.base.hessian(p)?;
        let b = self.bump.hessian(p)?;
        Some([
            a[0] + self.t * b[0],
            a[1] + self.t * b[1],
            a[2] + self.t * b[2],
        ])
    }
}

/// `s² f(x/s, y/s)`, the graph of the δ_s image.
#[derive(Debug, Clone)]
pub struct Dilated {
    pub base: Field,
    pub s: f64,
}

impl ScalarField2 for Dilated {
    fn value(&self, p: &Vec2) -> f64 {
        self.s * self.s * self.base.value(&(p / self.s))
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        self.s * self.base.gradient(&(p / self.s))
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        self.base.hessian(&(p / self.s))
    }
}

/// `f(y, x)`.
#[derive(Debug, Clone)]
pub struct Swapped(pub Field);

impl ScalarField2 for Swapped {
    fn value(&self, p: &Vec2) -> f64 {
        self.0.value(&Vec2::new(p.y, p.x))
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        let g = self.0.gradient(&Vec2::new(p.y, p.x));
        Vec2::new(g.y, g.x)
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        self.0
            .hessian(&Vec2::new(p.y, p.x))
            .map(|h| [h[2], h[1], h[0]])
    }
}

/// `−f`.
#[derive(Debug, Clone)]
pub struct Negated(pub Field);

impl ScalarField2 for Negated {
    fn value(&self, p: &Vec2) -> f64 {
        -self.0.value(p)
    }
    fn gradient(&self, p: &Vec2) -> Vec2 {
        -self.0.gradient(p)
    }
    fn hessian(&self, p: &Vec2) -> Option<Hessian> {
        self.0.hessian(p).map(|h| h.map(|v| -v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_fit_is_exact() {
        let q = Quadratic([0.5, -1.0, 2.0, 0.25, -0.5, 3.0]);
        let nodes = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.2),
            Vec2::new(0.1, 1.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.6, 0.0),
            Vec2::new(-0.1, 0.5),
        ];
        let vals = nodes.map(|p| q.eval(&p));
        let fit = Quadratic::fit(&nodes, &vals).unwrap();
        for (a, b) in fit.0.iter().zip(q.0.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        let collinear = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0].map(|t| Vec2::new(t, t));
        assert!(Quadratic::fit(&collinear, &[0.0; 6]).is_none());
    }

    #[test]
    fn wrappers_are_consistent() {
        let base: Field = Arc::new(Quadratic([0.0, 1.0, 0.0, 1.0, 2.0, 0.5]));
        let p = Vec2::new(0.3, -0.7);
        let d = Dilated {
            base: base.clone(),
            s: 2.0,
        };
        assert!((d.value(&(2.0 * p)) - 4.0 * base.value(&p)).abs() < 1e-14);
        let s = Swapped(base.clone());
        assert_eq!(s.value(&Vec2::new(p.y, p.x)), base.value(&p));
        let g = s.gradient(&Vec2::new(p.y, p.x));
        assert_eq!(g, Vec2::new(base.gradient(&p).y, base.gradient(&p).x));
        let n = Negated(base.clone());
        assert_eq!(n.hessian(&p).unwrap()[1], -2.0);
    }
}
