mod specs;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use heisenperim::perimeter::{
    content, iso_ratio, sandwich_bounds, scaling_check, strong_approx, PerimeterMeasure, Variant,
};
use heisenperim::planar::ConvexBody;
use heisenperim::quadrature::QuadOptions;
use heisenperim::reference::{reference_table, DEFAULT_RESOLUTION};
use heisenperim::surfaces::{
    characteristic_points_graph, characteristic_points_mesh, Surface, TriMesh,
};
use heisenperim::variation::{loci_csv, switching_loci, DEFAULT_LOCI_GRID};
use heisenperim::Error;

use specs::{body_label, parse_body, parse_domain, parse_surface};

const EXIT_TOLERANCE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(
    name = "heisenperim",
    version,
    about = "Perimeter measures in the Heisenberg group"
)]
struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, env = "HEISENPERIM_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Obj,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureSel {
    Mink,
    Anti,
    Both,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SurfaceArgs {
    /// square-bubble | q-bubble | dual-bubble | pansu-bubble | cc-ball | graph:EXPR | mesh:PATH
    #[arg(long)]
    surface: String,
    /// diamond | square | disk | ngon:K | file:PATH
    #[arg(long, default_value = "diamond")]
    body: String,
    /// Sampling resolution of meshed surfaces.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = parse_resolution)]
    resolution: usize,
    /// Rectangle x0,x1,y0,y1 for graph surfaces.
    #[arg(long, default_value = "-1,1,-1,1", allow_hyphen_values = true)]
    domain: String,
}

#[derive(Subcommand)]
enum Command {
    /// Polar dual of a body.
    Dual {
        #[arg(long)]
        body: String,
        #[command(flatten)]
        output: Output,
    },
    /// Build a surface and export it.
    Build {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Volume, contents and isoperimetric ratios of a surface.
    Perimeter {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value = "both")]
        measure: MeasureSel,
        #[arg(long, default_value_t = 1e-4)]
        rtol: f64,
        /// Expected Minkowski ratio; a mismatch exits with status 2.
        #[arg(long)]
        expect_mink: Option<f64>,
        /// Expected anti-Minkowski ratio.
        #[arg(long)]
        expect_anti: Option<f64>,
        /// Relative tolerance for the expectations.
        #[arg(long, default_value_t = 0.005)]
        expect_tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Ratios of the four reference surfaces for the unit diamond.
    Table53 {
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = parse_resolution)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-4)]
        rtol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Sandwich, scaling and polygonal approximation bounds.
    Bounds {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1e-4)]
        rtol: f64,
        /// Factor for the body scaling check.
        #[arg(long, default_value_t = 2.0)]
        scale: f64,
        /// Exponents n of the regular 2^n-gons.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        approx: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Switching loci of a graph for a polygonal body, as CSV.
    Loci {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = DEFAULT_LOCI_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_resolution(s: &str) -> Result<usize, String> {
    let r: usize = s.parse().map_err(|_| format!("{s:?} is not a count"))?;
    if r < 16 {
        return Err(format!("resolution {r} below 16"));
    }
    Ok(r)
}

enum Failure {
    Tolerance(String),
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged(_) => Failure::Tolerance(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Non-ASCII characters become `\uXXXX` escapes.
fn ascii(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c.is_ascii() {
            out.push(c);
        } else {
            let mut buf = [0u16; 2];
            for u in c.encode_utf16(&mut buf) {
                out.push_str(&format!("\\u{u:04x}"));
            }
        }
    }
    out
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    let text = ascii(text);
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn to_json(v: &impl Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Io(e.to_string()))
}

fn format_or(output: &Output, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = output.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Invalid(
            "output format not supported by this command".into(),
        ))
    }
}

fn quad_options(rtol: f64) -> Result<QuadOptions, Failure> {
    let o = QuadOptions::with_rtol(rtol);
    o.validate()?;
    Ok(o)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn cmd_dual(body: &str, output: &Output) -> Outcome {
    let q = parse_body(body)?;
    let d = q.polar_dual()?;
    match format_or(output, Format::Json, &[Format::Json, Format::Csv])? {
        Format::Json => emit(&output.out, &to_json(&d)?),
        _ => {
            let rows: Vec<Vec<String>> = match &d {
                ConvexBody::Disk { radius } => {
                    vec![vec!["disk".into(), radius.to_string(), String::new()]]
                }
                ConvexBody::Polygon { vertices } => vertices
                    .vertices()
                    .iter()
                    .map(|v| vec!["vertex".into(), v.x.to_string(), v.y.to_string()])
                    .collect(),
            };
            emit(&output.out, &csv_text(&["kind", "x", "y"], &rows))
        }
    }
}

struct Built {
    surface: Surface,
    body: ConvexBody,
}

fn build(args: &SurfaceArgs) -> Result<Built, Failure> {
    let body = parse_body(&args.body)?;
    let domain = parse_domain(&args.domain)?;
    let surface = parse_surface(&args.surface, &body, args.resolution, &domain)?;
    Ok(Built { surface, body })
}

fn mesh_json(m: &TriMesh) -> serde_json::Value {
    json!({
        "vertices": m.vertices().iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
        "triangles": m.triangles(),
    })
}

fn cmd_build(args: &SurfaceArgs, output: &Output) -> Outcome {
    let b = build(args)?;
    let summary = match &b.surface {
        Surface::Slab(s) => format!("slab: {} patches, {} walls", s.top.len(), s.walls.len()),
        Surface::Mesh(m) => format!("mesh: {} triangles, closed {}", m.len(), m.is_closed()),
        Surface::Graph(_) => format!("graph over {}", args.domain),
    };
    eprintln!("{summary}");
    let as_mesh = || match &b.surface {
        Surface::Slab(s) => s.to_mesh((args.resolution / 16).max(2)),
        Surface::Mesh(m) => m.clone(),
        Surface::Graph(g) => g.to_mesh(args.resolution),
    };
    if args.surface.ends_with("-bubble") {
        let (lo, hi) = as_mesh()
            .vertices()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v.z), hi.max(v.z))
            });
        eprintln!(
            "centered: z in [{lo:.6}, {hi:.6}]; from origin: z in [0, {:.6}]",
            hi - lo
        );
    }
    match format_or(output, Format::Obj, &[Format::Obj, Format::Json])? {
        Format::Obj => emit(&output.out, &as_mesh().to_obj()),
        _ => {
            let text = match &b.surface {
                Surface::Slab(s) => to_json(s)?,
                _ => to_json(&mesh_json(&as_mesh()))?,
            };
            emit(&output.out, &text)
        }
    }
}

#[derive(Serialize)]
struct PerimeterRow {
    surface: String,
    body: String,
    measure: Variant,
    resolution: Option<usize>,
    rtol: f64,
    volume: f64,
    perimeter: f64,
    ratio: Option<f64>,
    error_estimate: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn cmd_perimeter(
    args: &SurfaceArgs,
    measure: MeasureSel,
    rtol: f64,
    expect_mink: Option<f64>,
    expect_anti: Option<f64>,
    expect_tol: f64,
    output: &Output,
) -> Outcome {
    let opts = quad_options(rtol)?;
    let b = build(args)?;
    let volume = b.surface.volume(&opts)?;
    let resolution = matches!(b.surface, Surface::Mesh(_)).then_some(args.resolution);
    let characteristic = match &b.surface {
        Surface::Graph(g) => characteristic_points_graph(g, 129, 1e-3).len(),
        Surface::Mesh(m) => characteristic_points_mesh(m, 1e-3).len(),
        Surface::Slab(s) => {
            characteristic_points_mesh(&s.to_mesh((args.resolution / 16).max(2)), 1e-3).len()
        }
    };
    eprintln!("characteristic points sampled: {characteristic}");
    let variants = match measure {
        MeasureSel::Mink => vec![Variant::Minkowski],
        MeasureSel::Anti => vec![Variant::AntiMinkowski],
        MeasureSel::Both => vec![Variant::Minkowski, Variant::AntiMinkowski],
    };
    let mut rows = Vec::new();
    for v in variants {
        let m = PerimeterMeasure::new(b.body.clone(), v)?;
        let c = content(&m, &b.surface, &opts)?;
        rows.push(PerimeterRow {
            surface: args.surface.clone(),
            body: body_label(&b.body),
            measure: v,
            resolution,
            rtol,
            volume,
            perimeter: c.value,
            ratio: iso_ratio(volume, c.value).ok(),
            error_estimate: c.error_estimate,
        });
    }
    let text = match format_or(output, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => to_json(&rows)?,
        _ => csv_text(
            &[
                "surface",
                "body",
                "measure",
                "resolution",
                "rtol",
                "volume",
                "perimeter",
                "ratio",
                "error",
            ],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        csv_field(&r.surface),
                        r.body.clone(),
                        r.measure.to_string(),
                        r.resolution.map(|x| x.to_string()).unwrap_or_default(),
                        r.rtol.to_string(),
                        r.volume.to_string(),
                        r.perimeter.to_string(),
                        opt(r.ratio),
                        r.error_estimate.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(&output.out, &text)?;
    let mut misses = Vec::new();
    for r in &rows {
        let want = match r.measure {
            Variant::Minkowski => expect_mink,
            Variant::AntiMinkowski => expect_anti,
        };
        if let Some(w) = want {
            match r.ratio {
                Some(got) if (got - w).abs() <= expect_tol * w.abs() => {}
                got => misses.push(format!("{} ratio {} expected {w}", r.measure, opt(got))),
            }
        }
    }
    if misses.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(misses.join("; ")))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_table(resolution: usize, rtol: f64, output: &Output) -> Outcome {
    let opts = quad_options(rtol)?;
    let t = reference_table(resolution, &opts)?;
    let text = match format_or(output, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => to_json(&t)?,
        _ => t.to_csv()?,
    };
    emit(&output.out, &text)?;
    if t.all_pass() {
        Ok(())
    } else {
        let failed: Vec<&str> = t
            .rows
            .iter()
            .filter(|r| !r.passes())
            .map(|r| r.surface.label())
            .collect();
        Err(Failure::Tolerance(format!(
            "rows outside tolerance: [{}]; pansu maximal: mink {}, anti {}",
            failed.join(", "),
            t.pansu_maximal_mink,
            t.pansu_maximal_anti
        )))
    }
}

fn cmd_bounds(
    args: &SurfaceArgs,
    rtol: f64,
    scale: f64,
    approx: &[u32],
    output: &Output,
) -> Outcome {
    let opts = quad_options(rtol)?;
    let b = build(args)?;
    let sandwich = sandwich_bounds(&b.body, &b.surface, &opts)?;
    let (scaled, expected) = scaling_check(&b.body, scale, &b.surface, &opts)?;
    let scaling_holds = (scaled - expected).abs() <= 2.0 * rtol * expected.abs();
    let strong = approx
        .iter()
        .map(|&n| strong_approx(n, &b.surface, &opts))
        .collect::<heisenperim::Result<Vec<_>>>()?;
    let ok =
        sandwich.holds && sandwich.anti_holds && scaling_holds && strong.iter().all(|s| s.contains);
    let text = match format_or(output, Format::Json, &[Format::Json, Format::Csv])? {
        Format::Json => to_json(&json!({
            "surface": args.surface,
            "body": body_label(&b.body),
            "resolution": matches!(b.surface, Surface::Mesh(_)).then_some(args.resolution),
            "rtol": rtol,
            "sandwich": sandwich,
            "scaling": { "factor": scale, "scaled_body": scaled, "scaled_content": expected, "holds": scaling_holds },
            "strong_approx": strong,
        }))?,
        _ => {
            let mut rows = vec![
                vec![
                    "sandwich".into(),
                    sandwich.iso_q.to_string(),
                    sandwich.lower.to_string(),
                    sandwich.upper.to_string(),
                    sandwich.holds.to_string(),
                ],
                vec![
                    "sandwich_anti".into(),
                    sandwich.anti_iso_q.to_string(),
                    sandwich.anti_lower.to_string(),
                    sandwich.anti_upper.to_string(),
                    sandwich.anti_holds.to_string(),
                ],
                vec![
                    format!("scaling_{scale}"),
                    scaled.to_string(),
                    expected.to_string(),
                    expected.to_string(),
                    scaling_holds.to_string(),
                ],
            ];
            for s in &strong {
                rows.push(vec![
                    format!("strong_approx_{}", s.n),
                    s.iso_disk.to_string(),
                    s.lower.to_string(),
                    s.upper.to_string(),
                    s.contains.to_string(),
                ]);
            }
            csv_text(&["check", "value", "lower", "upper", "holds"], &rows)
        }
    };
    emit(&output.out, &text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Tolerance("a bound check failed".into()))
    }
}

fn cmd_loci(args: &SurfaceArgs, grid: usize, out: &Option<PathBuf>) -> Outcome {
    let b = build(args)?;
    let Surface::Graph(g) = &b.surface else {
        return Err(Failure::Invalid(
            "switching loci need a graph:EXPR surface".into(),
        ));
    };
    let loci = switching_loci(&b.body, g, grid)?;
    emit(out, &loci_csv(&loci)?)
}

fn configure_threads(threads: Option<usize>) -> Outcome {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Invalid(
            "HEISENPERIM_THREADS must be positive".into(),
        ));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Io(e.to_string()))?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Dual { body, output } => cmd_dual(body, output),
        Command::Build { surface, output } => cmd_build(surface, output),
        Command::Perimeter {
            surface,
            measure,
            rtol,
            expect_mink,
            expect_anti,
            expect_tol,
            output,
        } => cmd_perimeter(
            surface,
            *measure,
            *rtol,
            *expect_mink,
            *expect_anti,
            *expect_tol,
            output,
        ),
        Command::Table53 {
            resolution,
            rtol,
            output,
        } => cmd_table(*resolution, *rtol, output),
        Command::Bounds {
            surface,
            rtol,
            scale,
            approx,
            output,
        } => cmd_bounds(surface, *rtol, *scale, approx, output),
        Command::Loci { surface, grid, out } => cmd_loci(surface, *grid, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance(m)) => {
            eprintln!("tolerance failure: {}", ascii(&m));
            ExitCode::from(EXIT_TOLERANCE)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid input: {}", ascii(&m));
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {}", ascii(&m));
            ExitCode::FAILURE
        }
    }
}
