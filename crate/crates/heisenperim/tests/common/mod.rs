#![allow(dead_code)]

use heisenperim::planar::{ConvexBody, Vec2};
use heisenperim::surfaces::{Expr, GraphSurface, PlanarDomain, Quadratic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(r: &mut ChaCha8Rng, scale: f64) -> Vec2 {
    Vec2::new(r.random_range(-scale..scale), r.random_range(-scale..scale))
}

/// Centrally symmetric polygon from 2 to 5 random generators.
pub fn random_zonogon(r: &mut ChaCha8Rng) -> ConvexBody {
    loop {
        let k = r.random_range(2..=5);
        let gens: Vec<Vec2> = (0..k)
            .map(|_| {
                let t = r.random_range(0.0..std::f64::consts::PI);
                Vec2::new(t.cos(), t.sin()) * r.random_range(0.3..1.5)
            })
            .collect();
        if let Ok(b) = ConvexBody::from_generators(&gens) {
            return b;
        }
    }
}

pub fn bodies() -> Vec<(&'static str, ConvexBody)> {
    vec![
        ("diamond", ConvexBody::unit_diamond()),
        ("square", ConvexBody::unit_square()),
        ("disk", ConvexBody::unit_disk()),
    ]
}

pub fn square() -> PlanarDomain {
    PlanarDomain::rect(-1.0, 1.0, -1.0, 1.0).unwrap()
}

/// Graphs for the oracle and scaling checks.
pub fn graph_suite() -> Vec<(&'static str, GraphSurface)> {
    let q =
        |c: [f64; 6]| GraphSurface::from_field(Quadratic(c), PlanarDomain::unit_square()).unwrap();
    let e = |s: &str| {
        GraphSurface::from_field(Expr::parse(s).unwrap(), PlanarDomain::unit_square()).unwrap()
    };
    vec![
        ("zero", q([0.0; 6])),
        ("plane", q([0.2, 0.5, -0.3, 0.0, 0.0, 0.0])),
        ("paraboloid", q([0.0, 0.0, 0.0, 0.5, 0.0, 0.25])),
        ("saddle", q([0.0, 0.1, 0.0, 0.0, 0.6, 0.0])),
        ("cubic", e("0.3*x^3 - 0.2*x*y^2 + 0.1*y")),
        ("mixed", e("0.2*x^2*y + 0.3*y - 0.1*x*y")),
    ]
}
