mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use heisenperim::heisenberg::{sphere_sample_radius, SphereProfile};
use heisenperim::perimeter::{
    content, default_eps, graph_content, iso_report, mesh_content, neighborhood_oracle,
    sandwich_bounds, scaling_check, strong_approx, OracleOptions, PerimeterMeasure,
};
use heisenperim::planar::{
    enclosed_area, isoperimetrix, minkowski_length, polar_dual, segment_content, ConvexBody,
    PlanarCurve, PlanarSegment, Vec2,
};
use heisenperim::quadrature::QuadOptions;
use heisenperim::reference::{
    pansu_constant, reference_table, test_surfaces, ReferenceSurface, DEFAULT_RESOLUTION,
};
use heisenperim::surfaces::{build_polygonal_bubble, GraphSurface, Quadratic};
use heisenperim::variation::{
    first_variation, switching_loci, Bump, VariationOptions, DEFAULT_LOCI_GRID,
};

use common::{graph_suite, random_vec, random_zonogon, rng, square};

type Outcome = Result<String, String>;

fn fail_if(bad: Vec<String>, ok: String) -> Outcome {
    if bad.is_empty() {
        Ok(ok)
    } else {
        Err(bad.join("; "))
    }
}

fn reference_rows() -> Outcome {
    let t = Instant::now();
    let table =
        reference_table(DEFAULT_RESOLUTION, &QuadOptions::default()).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    for r in &table.rows {
        let line = format!(
            "{} mink {:.6} (want {}, err {:.2}%) anti {:.6} (want {}, err {:.2}%)",
            r.surface,
            r.report.ratio_mink,
            r.expected_mink,
            100.0 * r.rel_error_mink(),
            r.report.ratio_anti,
            r.expected_anti,
            100.0 * r.rel_error_anti()
        );
        if !r.pass_mink {
            bad.push(format!("{} mink", r.surface));
        }
        if !r.pass_anti {
            bad.push(format!("{} anti", r.surface));
        }
        lines.push(line);
    }
    if secs >= 300.0 {
        bad.push(format!("runtime {secs:.1}s over 300s"));
    }
    for l in &lines {
        println!("    {l}");
    }
    let n = bad.len();
    fail_if(bad, format!("4 rows in {secs:.1}s"))
        .map_err(|e| format!("{n} of 8 entries outside tolerance: {e}"))
}

fn pansu_ratio() -> Outcome {
    let s = ReferenceSurface::PansuBubble
        .build(DEFAULT_RESOLUTION)
        .map_err(|e| e.to_string())?;
    let r = iso_report(&ConvexBody::unit_disk(), &s, &QuadOptions::default())
        .map_err(|e| e.to_string())?;
    let want = pansu_constant();
    let err = (r.ratio_mink - want).abs() / want;
    let msg = format!(
        "ratio {:.6} vs {want:.6}, err {:.3}%",
        r.ratio_mink,
        100.0 * err
    );
    if err <= 0.005 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn pansu_ordering() -> Outcome {
    let table =
        reference_table(DEFAULT_RESOLUTION, &QuadOptions::default()).map_err(|e| e.to_string())?;
    let p = table.row(ReferenceSurface::PansuBubble).unwrap();
    let mut bad = Vec::new();
    for r in table
        .rows
        .iter()
        .filter(|r| r.surface != ReferenceSurface::PansuBubble)
    {
        for (col, a, b) in [
            ("mink", p.report.ratio_mink, r.report.ratio_mink),
            ("anti", p.report.ratio_anti, r.report.ratio_anti),
        ] {
            if a * (1.0 - p.tolerance) <= b * (1.0 + r.tolerance) {
                bad.push(format!("{col}: pansu {a:.6} vs {} {b:.6}", r.surface));
            }
        }
    }
    fail_if(bad, "pansu row maximal in both columns".into())
}

/// Volume of the unit ball from its height profile on a midpoint grid.
fn ball_volume(q: &ConvexBody) -> f64 {
    let p = SphereProfile::new(q).unwrap();
    let r = q.in_circum_radii().1;
    let n = 1200;
    let h = 2.0 * r / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = Vec2::new(-r + (i as f64 + 0.5) * h, -r + (j as f64 + 0.5) * h);
            if let (Some(t), Some(b)) = (p.top(&x), p.bottom(&x)) {
                total += (t - b) * h * h;
            }
        }
    }
    total
}

fn ball_law() -> Outcome {
    let opts = QuadOptions::default();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, q) in common::bodies() {
        let vol = ball_volume(&q);
        let m = PerimeterMeasure::minkowski(&q);
        for r in [0.5, 1.0, 2.0] {
            let mesh =
                sphere_sample_radius(&q, r, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
            let c = mesh_content(&m, &mesh, &opts)
                .map_err(|e| e.to_string())?
                .value;
            let want = 4.0 * r * r * r * vol;
            let err = (c - want).abs() / want;
            worst = worst.max(err);
            if err >= 0.01 {
                bad.push(format!("{name} r={r}: {c:.6} vs {want:.6}"));
            }
        }
    }
    fail_if(bad, format!("worst rel err {:.3}%", 100.0 * worst))
}

fn oracle_equivalence() -> Outcome {
    let opts = QuadOptions::default();
    let oracle = OracleOptions::default();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let suite = graph_suite();
    for (name, s) in &suite {
        for q in [ConvexBody::unit_diamond(), ConvexBody::unit_disk()] {
            let direct = graph_content(&PerimeterMeasure::minkowski(&q), s, &opts)
                .map_err(|e| e.to_string())?
                .value;
            let est =
                neighborhood_oracle(&q, s, &default_eps(s), &oracle).map_err(|e| e.to_string())?;
            let err = (est.extrapolated - direct).abs() / direct;
            worst = worst.max(err);
            if err >= 0.02 {
                bad.push(format!(
                    "{name}: oracle {:.6} direct {direct:.6}",
                    est.extrapolated
                ));
            }
        }
    }
    fail_if(
        bad,
        format!(
            "{} graphs, worst rel err {:.3}%",
            suite.len(),
            100.0 * worst
        ),
    )
}

fn planar_duality() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let q = match k % 10 {
            0 => ConvexBody::unit_disk(),
            1 => ConvexBody::unit_diamond(),
            2 => ConvexBody::regular_ngon(6).unwrap(),
            _ => random_zonogon(&mut r),
        };
        let a = random_vec(&mut r, 3.0);
        let b = a + random_vec(&mut r, 3.0);
        let l = PlanarSegment::new(a, b).map_err(|e| e.to_string())?;
        let c = segment_content(&q, &l);
        let dual_len = minkowski_length(&polar_dual(&q).map_err(|e| e.to_string())?, &l.as_curve());
        worst = worst.max((c - dual_len).abs() / (1.0 + c));
    }
    let msg = format!("1000 pairs, worst {worst:.2e}");
    if worst < 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn busemann() -> Outcome {
    let mut r = rng(7);
    let boundary = |q: &ConvexBody| PlanarCurve::closed(q.vertices().unwrap().to_vec()).unwrap();
    let mut metrics = vec![
        ConvexBody::unit_diamond(),
        ConvexBody::unit_square(),
        ConvexBody::regular_ngon(6).unwrap(),
    ];
    metrics.extend((0..3).map(|_| random_zonogon(&mut r)));
    let mut bad = Vec::new();
    let mut tried = 0;
    for q in &metrics {
        let iso = isoperimetrix(q, 1.0).map_err(|e| e.to_string())?;
        let best = minkowski_length(q, &boundary(&iso));
        for _ in 0..120 {
            let k = random_zonogon(&mut r);
            let k = k.scaled(1.0 / k.area().sqrt()).unwrap();
            let curve = boundary(&k);
            if (enclosed_area(&curve).unwrap() - 1.0).abs() > 1e-9 {
                bad.push("candidate not unit area".into());
            }
            let len = minkowski_length(q, &curve);
            tried += 1;
            let strict = len > best;
            let tie = k.approx_eq(&iso, 1e-9) && (len - best).abs() < 1e-9;
            if !(strict || tie) {
                bad.push(format!("length {len} not above {best}"));
            }
        }
    }
    fail_if(
        bad,
        format!("{tried} candidates over {} metrics", metrics.len()),
    )
}

fn structure_counts() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=4usize {
        let s = build_polygonal_bubble(&ConvexBody::regular_ngon(2 * n).unwrap())
            .map_err(|e| e.to_string())?;
        if s.top.len() != 2 * n * (n - 1) || s.walls.len() != 2 * n {
            bad.push(format!(
                "n={n}: {} patches, {} walls",
                s.top.len(),
                s.walls.len()
            ));
        }
    }
    let s = build_polygonal_bubble(&ConvexBody::unit_diamond()).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        for j in 0..=100 {
            let p = Vec2::new(
                -0.999 + 1.998 * i as f64 / 100.0,
                -0.999 + 1.998 * j as f64 / 100.0,
            );
            match s.top_value(&p) {
                Some(f) => worst = worst.max((f - 0.5 * (1.0 - (p.x * p.y).abs())).abs()),
                None => bad.push(format!("no top value at {p:?}")),
            }
        }
    }
    if worst >= 1e-9 {
        bad.push(format!("closed form off by {worst:.2e}"));
    }
    fail_if(
        bad,
        format!("counts ok for n = 2..4, closed form within {worst:.1e}"),
    )
}

fn homogeneity() -> Outcome {
    let opts = QuadOptions::default();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, s) in test_surfaces(DEFAULT_RESOLUTION).map_err(|e| e.to_string())? {
        for q in [
            ConvexBody::unit_diamond(),
            ConvexBody::regular_ngon(6).unwrap(),
        ] {
            for m in [
                PerimeterMeasure::minkowski(&q),
                PerimeterMeasure::anti(&q).unwrap(),
            ] {
                let c = content(&m, &s, &opts).map_err(|e| e.to_string())?.value;
                for f in [0.5, 2.0] {
                    let d = content(&m, &s.dilate(f).unwrap(), &opts)
                        .map_err(|e| e.to_string())?
                        .value;
                    let want = f * f * f * c;
                    let err = (d - want).abs() / want;
                    worst = worst.max(err);
                    if err > opts.rtol {
                        bad.push(format!("{name} dilation {f}: {d} vs {want}"));
                    }
                }
            }
            for r in [0.5, 2.0] {
                let (a, b) = scaling_check(&q, r, &s, &opts).map_err(|e| e.to_string())?;
                let err = (a - b).abs() / b;
                worst = worst.max(err);
                if err > opts.rtol {
                    bad.push(format!("{name} body scale {r}: {a} vs {b}"));
                }
            }
        }
    }
    fail_if(
        bad,
        format!("worst rel err {worst:.2e} (rtol {})", opts.rtol),
    )
}

fn brackets() -> Outcome {
    let opts = QuadOptions::default();
    let mut bad = Vec::new();
    let surfaces = test_surfaces(DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
    for (name, s) in &surfaces {
        for q in [
            ConvexBody::unit_diamond(),
            ConvexBody::unit_square(),
            ConvexBody::regular_ngon(6).unwrap(),
        ] {
            let r = sandwich_bounds(&q, s, &opts).map_err(|e| e.to_string())?;
            if !(r.holds && r.anti_holds) {
                bad.push(format!(
                    "{name}: sandwich [{}, {}] misses {}",
                    r.lower, r.upper, r.iso_disk
                ));
            }
        }
        let mut widths = Vec::new();
        for n in [2, 5] {
            let r = strong_approx(n, s, &opts).map_err(|e| e.to_string())?;
            if !r.contains {
                bad.push(format!(
                    "{name}: n={n} bracket [{}, {}] misses {}",
                    r.lower, r.upper, r.iso_disk
                ));
            }
            widths.push(r.width);
        }
        if widths[1] >= widths[0] {
            bad.push(format!(
                "{name}: width n=5 {} not below n=2 {}",
                widths[1], widths[0]
            ));
        }
    }
    fail_if(bad, format!("{} surfaces bracketed", surfaces.len()))
}

fn first_variation_checks() -> Outcome {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let bumps = [
        Bump::new(Vec2::new(0.0, 0.0), 0.5, 1.0).unwrap(),
        Bump::new(Vec2::new(-0.3, 0.4), 0.4, 0.2).unwrap(),
    ];
    for (a, b) in [(0.0, 0.0), (0.7, -0.4), (-1.5, 0.25)] {
        let s = GraphSurface::from_field(Quadratic::plane(0.3, a, b), square()).unwrap();
        for q in [ConvexBody::unit_square(), ConvexBody::unit_diamond()] {
            for m in [
                PerimeterMeasure::minkowski(&q),
                PerimeterMeasure::anti(&q).unwrap(),
            ] {
                for bump in &bumps {
                    let v = first_variation(&m, &s, bump, 1e-3, &VariationOptions::default())
                        .map_err(|e| e.to_string())?;
                    worst = worst.max(v.value.abs());
                    if v.value.abs() >= 1e-6 {
                        bad.push(format!("plane ({a}, {b}): variation {:.2e}", v.value));
                    }
                }
            }
        }
    }
    let cell = 2.0 * 2f64.sqrt() / DEFAULT_LOCI_GRID as f64;
    let mut lines = 0;
    for (k1, k2) in [(0.3, 0.7), (-0.2, 0.5), (1.0, -0.25)] {
        let s =
            GraphSurface::from_field(Quadratic([0.0, 0.0, 0.0, k1, 0.0, k2]), square()).unwrap();
        let loci = switching_loci(&ConvexBody::unit_square(), &s, DEFAULT_LOCI_GRID)
            .map_err(|e| e.to_string())?;
        for l in &loci {
            let Some((u, dist)) = l.line_fit() else {
                bad.push(format!("({k1}, {k2}): empty locus"));
                continue;
            };
            let want = if l.generator.x.abs() > 0.5 {
                -4.0 * k1
            } else {
                1.0 / (4.0 * k2)
            };
            let slope = u.y / u.x;
            if dist >= cell || (u.x * want - u.y).abs() / (1.0 + want * want).sqrt() >= 1e-6 {
                bad.push(format!(
                    "({k1}, {k2}): slope {slope} want {want}, offset {dist:.1e}"
                ));
            }
            lines += 1;
        }
    }
    fail_if(
        bad,
        format!("planes max {worst:.1e}, {lines} loci lines on the expected slopes"),
    )
}

fn disk_collapse() -> Outcome {
    let opts = QuadOptions::default();
    let d = ConvexBody::unit_disk();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, s) in test_surfaces(DEFAULT_RESOLUTION).map_err(|e| e.to_string())? {
        let a = content(&PerimeterMeasure::minkowski(&d), &s, &opts)
            .map_err(|e| e.to_string())?
            .value;
        let b = content(&PerimeterMeasure::anti(&d).unwrap(), &s, &opts)
            .map_err(|e| e.to_string())?
            .value;
        let err = (a - b).abs() / a;
        worst = worst.max(err);
        if err >= opts.rtol {
            bad.push(format!("{name}: {a} vs {b}"));
        }
    }
    fail_if(bad, format!("worst {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("reference table for the diamond", reference_rows),
        ("pansu sub-riemannian ratio", pansu_ratio),
        ("pansu bubble maximal", pansu_ordering),
        ("ball law", ball_law),
        ("neighborhood oracle equivalence", oracle_equivalence),
        ("planar duality", planar_duality),
        ("isoperimetrix optimality", busemann),
        ("bubble structure", structure_counts),
        ("homogeneity and scaling", homogeneity),
        ("sandwich and approximation brackets", brackets),
        ("first variation and switching loci", first_variation_checks),
        ("disk collapse", disk_collapse),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.1}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
