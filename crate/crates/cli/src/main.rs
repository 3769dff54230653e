//! Command-line interface: predict, verify, enumerate, implicitize, plot.
//!
//! Output is deterministic for identical (input, seed, flags); reports carry
//! no timing or environment data.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use newton_implicit_core::curves::{
    curve_to_json, derive_diff_denom, derive_same_denom, make_selection, normalize, parse_curve,
    CaseTag, CurveClass, ParametricCurve, SelectionKind,
};
use newton_implicit_core::geometry::contains;
use newton_implicit_core::oracle::{
    implicitize_interpolation, implicitize_sylvester, random_generic_coefficients,
    ImplicitPolynomial,
};
use newton_implicit_core::predictor::{predict, Candidate, CornerBreakpoint};
use newton_implicit_core::subdivisions::{
    enumerate_staircases, exponents_from_staircase, sample_lifting_runs,
};
use newton_implicit_core::{Error, LatticePolygon};

#[derive(Parser)]
#[command(
    name = "newton-implicit",
    version,
    about = "Newton polygons of implicit equations of parametric plane curves"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Predict the implicit polygon from the supports alone.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Predict, then implicitize exactly and compare the polygons.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient draws for supports-only inputs.
        #[arg(long, default_value_t = 1)]
        trials: u32,
        /// Coefficient magnitude bound for sampled draws.
        #[arg(long, default_value_t = 50)]
        bound: i64,
    },
    /// Stream staircase or subdivision certificates with exponent points.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Selection rule for exponent extraction (different denominators).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        selection: u8,
        /// Maximum number of certificates to emit.
        #[arg(long)]
        limit: Option<usize>,
        /// Lift the enumeration size cap.
        #[arg(long)]
        force: bool,
    },
    /// Compute the implicit equation exactly.
    Implicitize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient magnitude bound for supports-only inputs.
        #[arg(long, default_value_t = 50)]
        bound: i64,
    },
    /// Render the predicted polygon (with oracle overlay when available) as SVG.
    Plot {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Inline curve: shorthand "x=...; y=..." or a JSON document.
    #[arg(long, conflicts_with = "json")]
    curve: Option<String>,
    /// Path to a JSON curve file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every randomized step (coefficient draws, sample points).
    #[arg(long, env = "NEWTON_IMPLICIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file (required for plot; stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
struct Verdicts {
    contains: bool,
    equals: bool,
}

#[derive(Serialize)]
struct RunReport {
    input: serde_json::Value,
    class: CurveClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    case_tag: Option<CaseTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mirrored: Option<bool>,
    predicted: Vec<(i64, i64)>,
    candidates: Vec<Candidate>,
    breakpoints: Vec<CornerBreakpoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<(i64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdicts: Option<Verdicts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    implicit: Option<serde_json::Value>,
}

fn vertices_of(p: &LatticePolygon) -> Vec<(i64, i64)> {
    p.vertices().iter().map(|v| (v.x, v.y)).collect()
}

fn implicit_to_json(phi: &ImplicitPolynomial) -> serde_json::Value {
    let terms: serde_json::Map<String, serde_json::Value> = phi
        .terms()
        .map(|(&(e0, e1), c)| {
            let lit = if c.denom() == &1.into() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            (format!("{e0},{e1}"), serde_json::Value::String(lit))
        })
        .collect();
    serde_json::json!({ "terms": terms })
}

fn read_input(input: &InputArgs) -> Result<String, Error> {
    match (&input.curve, &input.json) {
        (Some(s), None) => Ok(s.clone()),
        (None, Some(path)) => {
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        _ => Err(Error::Syntax(
            "exactly one of --curve and --json is required".into(),
        )),
    }
}

fn prepare(input: &InputArgs) -> Result<ParametricCurve, Error> {
    normalize(&parse_curve(&read_input(input)?)?)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax(_)
        | Error::ZeroPolynomial
        | Error::NonRationalCoefficient(_)
        | Error::DegreeSubstitutionDetected(_)
        | Error::EmptyAfterReduction => 2,
        Error::UnclassifiableConfiguration
        | Error::InconsistentChains
        | Error::ChainMismatch { .. }
        | Error::NonGenericLifting
        | Error::DegreeInvariantViolated
        | Error::InternalInvariant(_) => 3,
        Error::KernelDimensionNotOne(_)
        | Error::ZeroResultant
        | Error::FactorSelectionAmbiguous
        | Error::ResamplingExhausted => 5,
        Error::CapExceeded { .. } => 6,
        Error::Io(_) => 7,
    }
}

fn report_text(r: &RunReport) -> String {
    let verts = |v: &[(i64, i64)]| {
        v.iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "class: {}", serde_json::to_value(r.class).unwrap().as_str().unwrap());
    if let Some(tag) = r.case_tag {
        let _ = writeln!(s, "case: {}", serde_json::to_value(tag).unwrap().as_str().unwrap());
    }
    if r.mirrored == Some(true) {
        let _ = writeln!(s, "mirrored: true");
    }
    let _ = writeln!(s, "predicted: {}", verts(&r.predicted));
    for c in &r.candidates {
        let _ = writeln!(s, "candidate {}: ({},{})", c.label, c.point.x, c.point.y);
    }
    for b in &r.breakpoints {
        let _ = writeln!(
            s,
            "breakpoint {}: ({},{}) delta {}",
            b.corner, b.point.x, b.point.y, b.delta
        );
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(s, "oracle: {}", verts(o));
    }
    if let Some(v) = &r.verdicts {
        let _ = writeln!(s, "contains: {}", v.contains);
        let _ = writeln!(s, "equals: {}", v.equals);
    }
    if let Some(imp) = &r.implicit {
        let _ = writeln!(s, "implicit: {}", serde_json::to_string(imp).unwrap());
    }
    s
}

fn emit(report: &RunReport, common: &CommonArgs) -> Result<(), Error> {
    let body = match common.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => report_text(report),
    };
    match &common.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn base_report(curve: &ParametricCurve) -> Result<RunReport, Error> {
    let predicted = predict(curve)?;
    let mirrored = (curve.class == CurveClass::SameDenominator)
        .then(|| derive_same_denom(curve).map(|d| d.mirrored))
        .transpose()?;
    Ok(RunReport {
        input: curve_to_json(curve),
        class: curve.class,
        case_tag: predicted.case_tag,
        mirrored,
        predicted: vertices_of(&predicted.polygon),
        candidates: predicted.candidates,
        breakpoints: predicted.breakpoints,
        oracle: None,
        verdicts: None,
        implicit: None,
    })
}

/// Exact implicit polynomial of a concrete curve: Sylvester resultant first,
/// interpolation over the predicted support as fallback.
fn implicitize(curve: &ParametricCurve, predicted: &LatticePolygon, seed: u64) -> Result<ImplicitPolynomial, Error> {
    match implicitize_sylvester(curve, seed) {
        Ok(phi) => Ok(phi),
        Err(first) => implicitize_interpolation(curve, &predicted.lattice_points(), seed)
            .map_err(|_| first),
    }
}

fn cmd_predict(input: &InputArgs, common: &CommonArgs) -> Result<ExitCode, Error> {
    let curve = prepare(input)?;
    let report = base_report(&curve)?;
    emit(&report, common)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    input: &InputArgs,
    common: &CommonArgs,
    trials: u32,
    bound: i64,
) -> Result<ExitCode, Error> {
    let curve = prepare(input)?;
    let mut report = base_report(&curve)?;
    let predicted = newton_implicit_core::geometry::convex_hull(
        report.predicted.iter().map(|&(x, y)| newton_implicit_core::LatticePoint::new(x, y)),
    );
    let trials = if curve.supports_only { trials.max(1) } else { 1 };
    let (mut all_contain, mut all_equal) = (true, true);
    let mut last = None;
    for i in 0..u64::from(trials) {
        let concrete = if curve.supports_only {
            random_generic_coefficients(&curve, bound, common.seed.wrapping_add(i))?
        } else {
            curve.clone()
        };
        let phi = implicitize(&concrete, &predicted, common.seed.wrapping_add(1000 + i))?;
        let polygon = phi.newton_polygon()?;
        all_contain &= contains(&predicted, &polygon);
        all_equal &= polygon == predicted;
        last = Some(polygon);
    }
    report.oracle = last.as_ref().map(vertices_of);
    report.verdicts = Some(Verdicts {
        contains: all_contain,
        equals: all_equal,
    });
    emit(&report, common)?;
    Ok(if all_contain {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn cmd_implicitize(input: &InputArgs, common: &CommonArgs, bound: i64) -> Result<ExitCode, Error> {
    let curve = prepare(input)?;
    let mut report = base_report(&curve)?;
    let predicted = newton_implicit_core::geometry::convex_hull(
        report.predicted.iter().map(|&(x, y)| newton_implicit_core::LatticePoint::new(x, y)),
    );
    let concrete = if curve.supports_only {
        random_generic_coefficients(&curve, bound, common.seed)?
    } else {
        curve.clone()
    };
    let phi = implicitize(&concrete, &predicted, common.seed.wrapping_add(1000))?;
    let polygon = phi.newton_polygon()?;
    report.verdicts = Some(Verdicts {
        contains: contains(&predicted, &polygon),
        equals: polygon == predicted,
    });
    report.oracle = Some(vertices_of(&polygon));
    report.implicit = Some(implicit_to_json(&phi));
    emit(&report, common)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_enumerate(
    input: &InputArgs,
    common: &CommonArgs,
    selection: u8,
    limit: Option<usize>,
    force: bool,
) -> Result<ExitCode, Error> {
    let curve = prepare(input)?;
    let limit = limit.unwrap_or(usize::MAX);
    let mut lines = Vec::new();
    if curve.class == CurveClass::SameDenominator {
        let data = derive_same_denom(&curve)?;
        let runs = sample_lifting_runs(&data, 50, common.seed);
        let mut seen = std::collections::BTreeSet::new();
        for run in &runs {
            let cert = serde_json::json!({
                "subdivision": run.subdivision,
                "exponents": [run.exponents.0, run.exponents.1, run.exponents.2],
            });
            let text = serde_json::to_string(&cert).unwrap();
            if seen.insert(text.clone()) {
                lines.push(text);
            }
            if lines.len() >= limit {
                break;
            }
        }
    } else {
        let data = derive_diff_denom(&curve)?;
        let kind = if selection == 1 {
            SelectionKind::Selection1
        } else {
            SelectionKind::Selection2
        };
        let sel = make_selection(&data, kind)?;
        let stairs = enumerate_staircases(&data.a[0], &data.a[1], force)?;
        for s in stairs.iter().take(limit) {
            let e = exponents_from_staircase(s, &sel);
            let cert = serde_json::json!({
                "staircase": s,
                "exponents": [e.x, e.y],
            });
            lines.push(serde_json::to_string(&cert).unwrap());
        }
    }
    let body = lines.join("\n") + "\n";
    match &common.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(ExitCode::SUCCESS)
}

// Fixed SVG rendering constants; golden tests depend on them.
const SVG_SCALE: i64 = 32;
const SVG_MARGIN: i64 = 24;

fn render_svg(predicted: &LatticePolygon, oracle: Option<&LatticePolygon>) -> String {
    let max_x = predicted.max_x().max(1);
    let max_y = predicted.max_y().max(1);
    let width = 2 * SVG_MARGIN + max_x * SVG_SCALE;
    let height = 2 * SVG_MARGIN + max_y * SVG_SCALE;
    let px = |x: i64| SVG_MARGIN + x * SVG_SCALE;
    let py = |y: i64| SVG_MARGIN + (max_y - y) * SVG_SCALE;
    let path = |poly: &LatticePolygon| {
        poly.vertices()
            .iter()
            .map(|v| format!("{},{}", px(v.x), py(v.y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    for x in 0..=max_x {
        let _ = writeln!(
            s,
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#dddddd\"/>",
            px(x),
            py(max_y),
            py(0)
        );
    }
    for y in 0..=max_y {
        let _ = writeln!(
            s,
            "  <line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#dddddd\"/>",
            px(0),
            px(max_x),
            py(y)
        );
    }
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"#1f77b4\" stroke-width=\"2\"/>",
        path(predicted)
    );
    for v in predicted.vertices() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#1f77b4\"/>",
            px(v.x),
            py(v.y)
        );
    }
    if let Some(o) = oracle {
        let _ = writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>",
            path(o)
        );
        for v in o.vertices() {
            let _ = writeln!(
                s,
                "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#d62728\"/>",
                px(v.x),
                py(v.y)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_plot(input: &InputArgs, common: &CommonArgs) -> Result<ExitCode, Error> {
    let out = common
        .out
        .as_ref()
        .ok_or_else(|| Error::Io("plot requires --out".into()))?;
    let curve = prepare(input)?;
    let predicted = predict(&curve)?;
    let oracle = if curve.supports_only {
        None
    } else {
        implicitize(&curve, &predicted.polygon, common.seed)
            .ok()
            .map(|phi| phi.newton_polygon())
            .transpose()?
    };
    let svg = render_svg(&predicted.polygon, oracle.as_ref());
    std::fs::write(out, svg).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    println!(
        "{}",
        serde_json::json!({
            "out": out.display().to_string(),
            "predicted_vertices": predicted.polygon.vertices().len(),
            "oracle_vertices": oracle.as_ref().map(|o| o.vertices().len()),
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Predict { input, common } => cmd_predict(input, common),
        Cmd::Verify {
            input,
            common,
            trials,
            bound,
        } => cmd_verify(input, common, *trials, *bound),
        Cmd::Enumerate {
            input,
            common,
            selection,
            limit,
            force,
        } => cmd_enumerate(input, common, *selection, *limit, *force),
        Cmd::Implicitize {
            input,
            common,
            bound,
        } => cmd_implicitize(input, common, *bound),
        Cmd::Plot { input, common } => cmd_plot(input, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
