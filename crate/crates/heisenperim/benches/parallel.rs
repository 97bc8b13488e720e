use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heisenperim::heisenberg::sphere_sample_with;
use heisenperim::perimeter::{content, PerimeterMeasure};
use heisenperim::planar::ConvexBody;
use heisenperim::quadrature::QuadOptions;
use heisenperim::surfaces::{Expr, GraphSurface, PlanarDomain, Surface};
use heisenperim::Execution;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn graph(c: &mut Criterion) {
    let s = Surface::Graph(
        GraphSurface::from_field(
            Expr::parse("0.3*x^2 - 0.2*x*y + 0.5*y^2").unwrap(),
            PlanarDomain::rect(-1.0, 1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap(),
    );
    let m = PerimeterMeasure::minkowski(&ConvexBody::unit_disk());
    let mut g = c.benchmark_group("graph_content");
    for (name, exec) in MODES {
        let opts = QuadOptions {
            execution: exec,
            ..QuadOptions::with_rtol(1e-6)
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| content(&m, &s, &opts).unwrap())
        });
    }
    g.finish();
}

fn mesh(c: &mut Criterion) {
    let q = ConvexBody::unit_diamond();
    let s = Surface::Mesh(sphere_sample_with(&q, 128, Execution::Parallel).unwrap());
    let m = PerimeterMeasure::minkowski(&q);
    let mut g = c.benchmark_group("mesh_content");
    for (name, exec) in MODES {
        let opts = QuadOptions {
            execution: exec,
            ..QuadOptions::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| content(&m, &s, &opts).unwrap())
        });
    }
    g.finish();
}

fn sphere(c: &mut Criterion) {
    let q = ConvexBody::regular_ngon(6).unwrap();
    let mut g = c.benchmark_group("sphere_sample");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sphere_sample_with(&q, 128, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, graph, mesh, sphere);
criterion_main!(benches);
