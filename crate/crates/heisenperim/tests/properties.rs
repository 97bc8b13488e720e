mod common;

use heisenperim::heisenberg::{dilate, frame, group_mul, HPoint};
use heisenperim::perimeter::{content, polygonal_fast_content, PerimeterMeasure};
use heisenperim::planar::{ConvexBody, Vec2};
use heisenperim::quadrature::QuadOptions;
use heisenperim::surfaces::{GraphSurface, PlanarDomain, Quadratic, Surface};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = HPoint> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| HPoint::new(x, y, z))
}

fn vec2() -> impl Strategy<Value = Vec2> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn zonogon() -> impl Strategy<Value = ConvexBody> {
    prop::collection::vec((0.0..std::f64::consts::PI, 0.3..1.5f64), 2..6).prop_filter_map(
        "degenerate generators",
        |gens| {
            let v: Vec<Vec2> = gens
                .iter()
                .map(|(t, r)| Vec2::new(t.cos(), t.sin()) * *r)
                .collect();
            ConvexBody::from_generators(&v).ok()
        },
    )
}

fn quadratic() -> impl Strategy<Value = Quadratic> {
    prop::array::uniform6(-1.0..1.0f64).prop_map(Quadratic)
}

fn close(a: &HPoint, b: &HPoint, tol: f64) -> bool {
    a.dist_euclid(b) <= tol * (1.0 + a.to_vec3().norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_is_associative(a in point(), b in point(), c in point()) {
        let l = group_mul(&group_mul(&a, &b), &c);
        let r = group_mul(&a, &group_mul(&b, &c));
        prop_assert!(close(&l, &r, 1e-12));
    }

    #[test]
    fn inverse_is_two_sided(a in point()) {
        let e = HPoint::new(0.0, 0.0, 0.0);
        prop_assert!(close(&group_mul(&a, &a.inverse()), &e, 1e-12));
        prop_assert!(close(&group_mul(&a.inverse(), &a), &e, 1e-12));
    }

    #[test]
    fn dilation_is_a_homomorphism(a in point(), b in point(), s in 0.1..4.0f64) {
        let l = dilate(s, &group_mul(&a, &b)).unwrap();
        let r = group_mul(&dilate(s, &a).unwrap(), &dilate(s, &b).unwrap());
        prop_assert!(close(&l, &r, 1e-12));
    }

    #[test]
    fn frame_is_left_invariant(b in point()) {
        let (x0, y0) = frame(&HPoint::new(0.0, 0.0, 0.0));
        let (xb, yb) = frame(&b);
        let h = 1e-6;
        for (v0, vb) in [(x0, xb), (y0, yb)] {
            let plus = group_mul(&b, &HPoint::from_vec3(&(v0 * h)));
            let d = (plus.to_vec3() - b.to_vec3()) / h;
            prop_assert!((d - vb).norm() < 1e-6);
        }
    }

    #[test]
    fn norm_duality_inequality(q in zonogon(), x in vec2(), y in vec2()) {
        prop_assert!(x.dot(&y).abs() <= q.norm(&x) * q.dual_norm(&y) * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn polar_is_an_involution(q in zonogon()) {
        let back = q.polar_dual().unwrap().polar_dual().unwrap();
        prop_assert!(back.approx_eq(&q, 1e-9));
    }

    #[test]
    fn norm_is_homogeneous(q in zonogon(), x in vec2(), t in -4.0..4.0f64) {
        let l = q.norm(&(x * t));
        prop_assert!((l - t.abs() * q.norm(&x)).abs() <= 1e-12 * (1.0 + l));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn content_is_cubic_under_dilation(f in quadratic(), q in zonogon(), s in 0.3..3.0f64) {
        let opts = QuadOptions::fixed(4);
        let g = Surface::Graph(GraphSurface::from_field(f, PlanarDomain::unit_square()).unwrap());
        let m = PerimeterMeasure::minkowski(&q);
        let c = content(&m, &g, &opts).unwrap().value;
        let d = content(&m, &g.dilate(s).unwrap(), &opts).unwrap().value;
        prop_assert!((d - s.powi(3) * c).abs() <= 1e-9 * (1.0 + d));
    }

    #[test]
    fn content_scales_with_body(f in quadratic(), q in zonogon(), r in 0.3..3.0f64) {
        let opts = QuadOptions::fixed(3);
        let g = Surface::Graph(GraphSurface::from_field(f, PlanarDomain::unit_square()).unwrap());
        let a = content(&PerimeterMeasure::minkowski(&q), &g, &opts).unwrap().value;
        let b = content(&PerimeterMeasure::minkowski(&q.scaled(r).unwrap()), &g, &opts).unwrap().value;
        prop_assert!((b - r * a).abs() <= 1e-9 * (1.0 + b));
    }

    #[test]
    fn fast_path_is_exact(f in quadratic(), q in zonogon()) {
        let opts = QuadOptions::fixed(3);
        let g = Surface::Graph(GraphSurface::from_field(f, common::square()).unwrap());
        for m in [PerimeterMeasure::minkowski(&q), PerimeterMeasure::anti(&q).unwrap()] {
            let a = content(&m, &g, &opts).unwrap().value;
            let b = polygonal_fast_content(&m, &g, &opts).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
