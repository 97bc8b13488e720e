mod common;

use heisenperim::heisenberg::Vec3;
use heisenperim::planar::{ConvexBody, Vec2};
use heisenperim::quadrature::QuadOptions;
use heisenperim::surfaces::{
    build_polygonal_bubble, build_q_bubble_mesh, build_square_bubble, characteristic_points_mesh,
    GraphSurface, ImplicitSurface, PlanarDomain, Quadratic, Surface, TriMesh,
};

#[test]
fn structure_counts() {
    for n in 2..=4usize {
        let s = build_polygonal_bubble(&ConvexBody::regular_ngon(2 * n).unwrap()).unwrap();
        assert_eq!(s.top.len(), 2 * n * (n - 1), "n = {n}");
        assert_eq!(s.walls.len(), 2 * n, "n = {n}");
        assert!((s.volume() - 3.0).abs() < 1e-9, "{}", s.volume());
    }
    let sq = build_square_bubble();
    assert_eq!((sq.top.len(), sq.walls.len()), (4, 4));
}

#[test]
fn diamond_bubble_closed_form() {
    let s = build_polygonal_bubble(&ConvexBody::unit_diamond()).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        for j in 0..=40 {
            let p = Vec2::new(
                -0.999 + 1.998 * i as f64 / 40.0,
                -0.999 + 1.998 * j as f64 / 40.0,
            );
            let f = s.top_value(&p).unwrap();
            worst = worst.max((f - 0.5 * (1.0 - (p.x * p.y).abs())).abs());
        }
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn patches_join_continuously() {
    for q in [
        ConvexBody::regular_ngon(6).unwrap(),
        ConvexBody::regular_ngon(8).unwrap(),
    ] {
        let s = build_polygonal_bubble(&q).unwrap();
        let r = s.support_body().unwrap().in_circum_radii().0 * 0.95;
        for angle in [0.1f64, 0.7, 1.3, 2.2] {
            let d = Vec2::new(angle.cos(), angle.sin());
            let steps = 20000;
            let h = 2.0 * r / steps as f64;
            let mut prev = s.top_value(&(-r * d)).unwrap();
            for k in 1..=steps {
                let f = s.top_value(&((-r + k as f64 * h) * d)).unwrap();
                assert!(
                    (f - prev).abs() < 4.0 * h,
                    "jump {} at step {k}",
                    (f - prev).abs()
                );
                prev = f;
            }
        }
    }
}

#[test]
fn walls_meet_the_top() {
    let s = build_polygonal_bubble(&ConvexBody::regular_ngon(6).unwrap()).unwrap();
    let centroid: Vec2 = s.support.iter().sum::<Vec2>() / s.support.len() as f64;
    for w in &s.walls {
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let (lo, hi) = w.heights(t).unwrap();
            let p = w.point(t);
            let inside = p + (centroid - p) * 1e-9;
            let f = s.top_value(&inside).unwrap();
            assert!(
                (hi - f).abs() < 1e-6 && (lo + f).abs() < 1e-6,
                "{lo} {hi} {f}"
            );
        }
    }
}

/// Vertical distance to the top or bottom, or to the wall band on the rim.
fn slab_distance(s: &heisenperim::surfaces::SlabSurface, p: &Vec3) -> f64 {
    let on_rim = p.x.abs().max(p.y.abs()) > 1.0 - 1e-9;
    let f = 0.5 * (1.0 - (p.x * p.y).abs());
    if on_rim {
        (p.z.abs() - f).max(0.0)
    } else {
        (p.z.abs() - s.top_value(&Vec2::new(p.x, p.y)).unwrap()).abs()
    }
}

#[test]
fn diamond_mesh_matches_square_slab() {
    let slab = build_square_bubble();
    let mesh = build_q_bubble_mesh(&ConvexBody::unit_diamond(), 128).unwrap();
    assert!(mesh.is_closed());
    let h = mesh
        .triangles()
        .iter()
        .flat_map(|t| {
            let c = [
                mesh.vertices()[t[0]],
                mesh.vertices()[t[1]],
                mesh.vertices()[t[2]],
            ];
            [
                (c[0] - c[1]).norm(),
                (c[1] - c[2]).norm(),
                (c[2] - c[0]).norm(),
            ]
        })
        .fold(0.0, f64::max);
    let forward = mesh
        .vertices()
        .iter()
        .map(|v| slab_distance(&slab, v))
        .fold(0.0, f64::max);
    let samples = slab.to_mesh(24);
    let backward = samples
        .vertices()
        .iter()
        .map(|p| {
            mesh.vertices()
                .iter()
                .map(|v| (v - p).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    assert!(forward < 1e-9, "{forward}");
    assert!(backward < 2.0 * h, "{backward} vs edge {h}");
    assert!((mesh.volume().unwrap() - 3.0).abs() < 0.01);
}

#[test]
fn pansu_mesh_is_symmetric() {
    let m = build_q_bubble_mesh(&ConvexBody::unit_disk(), 128).unwrap();
    assert!(m.is_closed());
    let zmax = m.vertices().iter().map(|v| v.z).fold(f64::MIN, f64::max);
    let zmin = m.vertices().iter().map(|v| v.z).fold(f64::MAX, f64::min);
    assert!((zmax - 0.5).abs() < 1e-12 && (zmin + 0.5).abs() < 1e-12);
    let poles = characteristic_points_mesh(&m, 0.05);
    assert!(!poles.is_empty());
    assert!(poles
        .iter()
        .all(|p| p.x.hypot(p.y) < 0.2 && p.z.abs() > 0.4));
}

#[test]
fn implicit_sphere() {
    let s = ImplicitSurface::sphere(Vec3::new(0.1, 0.0, -0.2), 1.0).unwrap();
    let m = s.mesh(0.04).unwrap();
    assert!(m.mesh.is_closed());
    assert_eq!(m.singular, 0);
    let pi = std::f64::consts::PI;
    assert!((m.mesh.volume().unwrap() - 4.0 * pi / 3.0).abs() < 0.01 * 4.0 * pi / 3.0);
    assert!((m.mesh.area() - 4.0 * pi).abs() < 0.01 * 4.0 * pi);
}

#[test]
fn exports_roundtrip() {
    let s = build_polygonal_bubble(&ConvexBody::regular_ngon(6).unwrap()).unwrap();
    let back: heisenperim::surfaces::SlabSurface =
        serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    let m = s.to_mesh(4).welded(1e-9);
    let again = TriMesh::from_obj(&m.to_obj()).unwrap();
    assert_eq!(again.len(), m.len());
    assert!((again.volume().unwrap() - m.volume().unwrap()).abs() < 1e-9);
}

#[test]
fn dilation_scales_volume() {
    let opts = QuadOptions::default();
    let g = GraphSurface::from_field(
        Quadratic([1.0, 0.0, 0.0, 0.5, 0.0, 0.0]),
        PlanarDomain::unit_square(),
    )
    .unwrap();
    for s in [Surface::Slab(build_square_bubble()), Surface::Graph(g)] {
        let v = s.volume(&opts).unwrap();
        let v2 = s.dilate(2.0).unwrap().volume(&opts).unwrap();
        assert!((v2 - 16.0 * v).abs() < 1e-3 * v2, "{} {v} {v2}", s.kind());
    }
}
