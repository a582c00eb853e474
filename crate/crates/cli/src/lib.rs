//! Command-line front end for `conway-core`: build tangential polygons, check
//! extension specs, render figures and fuzz the iff-conditions.
//!
//! Exit codes are 0 (success or check passed), 1 (check failed) and 2
//! (invalid input). Errors are printed to standard output as
//! `{"error": {"kind": …, "message": …}}`.

pub mod document;
pub mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use conway_core::verify::{self, Verdicts};
use conway_core::{conway, CheckReport, FuzzConfig, Tolerance};
use serde::Serialize;

use crate::document::{
    xy, BuiltPolygon, InputDocument, PolygonDocument, RenderOptions, SceneDocument, Selector,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "conway",
    version,
    about = "Conway circles of tangential polygons"
)]
pub struct Cli {
    /// Relative tolerance, scaled by the diameter of the checked point set.
    #[arg(long, global = true, env = "CONWAY_TOLERANCE_REL")]
    pub tolerance_rel: Option<f64>,
    /// Absolute tolerance floor.
    #[arg(long, global = true)]
    pub tolerance_abs: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a tangential polygon and print it as JSON.
    Build(BuildArgs),
    /// Run the condition check, the concyclicity residual and the oracle.
    Check(CheckArgs),
    /// Draw the construction as SVG.
    Render(RenderArgs),
    /// Fuzz the iff-conditions on random polygons.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexList(pub Vec<[f64; 2]>);

fn parse_vertices(s: &str) -> Result<VertexList, String> {
    s.split(';')
        .map(|pair| {
            let coords: Vec<&str> = pair.split(',').collect();
            let [x, y] = coords.as_slice() else {
                return Err(format!("expected `x,y`, got `{pair}`"));
            };
            let parse = |c: &str| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad coordinate `{c}`: {e}"))
            };
            Ok([parse(x)?, parse(y)?])
        })
        .collect::<Result<Vec<_>, _>>()
        .map(VertexList)
}

#[derive(Debug, Args)]
pub struct PolygonArgs {
    /// Side lengths `λ_1,…,λ_n`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["vertices", "input"])]
    pub sides: Option<Vec<f64>>,
    /// Vertices as `x,y;x,y;…`.
    #[arg(long, value_parser = parse_vertices, allow_hyphen_values = true, conflicts_with = "input")]
    pub vertices: Option<VertexList>,
    /// Tangent length at `V_1` (even number of sides).
    #[arg(long, allow_hyphen_values = true)]
    pub h0: Option<f64>,
    /// JSON polygon or scene document; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Allow negative tangent lengths when synthesizing from sides.
    #[arg(long)]
    pub relaxed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectorKind {
    Conway,
    Theorem1,
    Corollary1,
    Corollary2,
    Corollary3,
    Theorem2,
    Theorem3,
    Corollary4,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Extension family; defaults by vertex count.
    #[arg(long, value_enum)]
    pub selector: Option<SelectorKind>,
    /// `x_A` for `theorem1`.
    #[arg(long, allow_hyphen_values = true)]
    pub x_a: Option<f64>,
    /// `x_1` for `theorem2`.
    #[arg(long, allow_hyphen_values = true)]
    pub x_1: Option<f64>,
    /// Tangency distance from `V_4` on side `d` for `corollary4`.
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<f64>,
    /// Explicit extensions: `n` vertex values or `2n` per-end values.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "selector"
    )]
    pub extensions: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Image width in pixels.
    #[arg(long)]
    pub size: Option<f64>,
    /// Line width in pixels.
    #[arg(long)]
    pub stroke: Option<f64>,
    #[arg(long)]
    pub no_labels: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Odd polygons, n in 3..=9 (default).
    #[arg(long, conflicts_with = "even")]
    pub odd: bool,
    /// Even polygons, n in 4..=8.
    #[arg(long)]
    pub even: bool,
    /// Largest vertex count.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Single-vertex perturbation for the negative tests; 0 skips them.
    #[arg(long)]
    pub perturbation: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Error reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            kind: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Outer<'a> {
            error: Inner<'a>,
        }
        let doc = Outer {
            error: Inner {
                kind: &self.kind,
                message: &self.message,
            },
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<conway_core::Error> for CliError {
    fn from(e: conway_core::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: CliError::new("invalid_argument", e.kind().to_string()).to_json(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(code, rendered)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: EXIT_INVALID,
            stdout: e.to_json(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let defaults = Tolerance::default();
    let tol = Tolerance::new(
        cli.tolerance_rel.unwrap_or(defaults.rel),
        cli.tolerance_abs.unwrap_or(defaults.abs_floor),
    )?;
    match &cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Check(args) => cmd_check(args, &tol),
        Command::Render(args) => cmd_render(args, &tol),
        Command::Fuzz(args) => cmd_fuzz(args, &tol),
    }
}

fn read_input(path: &Path) -> Result<InputDocument, CliError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::new("io", format!("standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::new("parse", e.to_string()))
}

fn emit(out: Option<&Path>, payload: String, code: i32) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, payload)
                .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
            Ok(Outcome::ok(code, String::new()))
        }
        None => Ok(Outcome::ok(code, payload)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn scene_from_args(polygon: &PolygonArgs) -> Result<SceneDocument, CliError> {
    let mut scene = match (&polygon.input, &polygon.sides, &polygon.vertices) {
        (Some(path), _, _) => read_input(path)?.into_scene(),
        (None, Some(sides), _) => SceneDocument {
            polygon: PolygonDocument::from_sides(sides.clone(), None),
            ..Default::default()
        },
        (None, None, Some(vertices)) => SceneDocument {
            polygon: PolygonDocument::from_vertices(vertices.0.clone()),
            ..Default::default()
        },
        (None, None, None) => {
            return Err(CliError::new(
                "missing_parameter",
                "give the polygon with --sides, --vertices or --input",
            ))
        }
    };
    if polygon.h0.is_some() {
        scene.polygon.h0 = polygon.h0;
    }
    scene.polygon.relaxed |= polygon.relaxed;
    Ok(scene)
}

fn apply_spec_args(scene: &mut SceneDocument, spec: &SpecArgs) -> Result<(), CliError> {
    let missing = |flag: &str, kind: &str| {
        CliError::new(
            "missing_parameter",
            format!("--selector {kind} needs {flag}"),
        )
    };
    let Some(kind) = spec.selector else {
        for (given, flag) in [(spec.x_a, "--x-a"), (spec.x_1, "--x-1"), (spec.d0, "--d0")] {
            if given.is_some() {
                return Err(CliError::new(
                    "invalid_argument",
                    format!("{flag} needs --selector"),
                ));
            }
        }
        if let Some(values) = &spec.extensions {
            scene.extensions = Some(values.clone());
            scene.selector = None;
        }
        return Ok(());
    };
    let unused = match kind {
        SelectorKind::Theorem1 => [(spec.x_1, "--x-1"), (spec.d0, "--d0")],
        SelectorKind::Theorem2 => [(spec.x_a, "--x-a"), (spec.d0, "--d0")],
        SelectorKind::Corollary4 => [(spec.x_a, "--x-a"), (spec.x_1, "--x-1")],
        _ => [(spec.x_a.or(spec.x_1), "--x-a/--x-1"), (spec.d0, "--d0")],
    };
    if let Some((_, flag)) = unused.iter().find(|(v, _)| v.is_some()) {
        return Err(CliError::new(
            "invalid_argument",
            format!("{flag} does not apply to this selector"),
        ));
    }
    let selector = match kind {
        SelectorKind::Conway => Selector::Conway,
        SelectorKind::Theorem1 => Selector::Theorem1 {
            x_a: spec.x_a.ok_or_else(|| missing("--x-a", "theorem1"))?,
        },
        SelectorKind::Corollary1 => Selector::Corollary1,
        SelectorKind::Corollary2 => Selector::Corollary2,
        SelectorKind::Corollary3 => Selector::Corollary3,
        SelectorKind::Theorem2 => Selector::Theorem2 {
            x_1: spec.x_1.ok_or_else(|| missing("--x-1", "theorem2"))?,
        },
        SelectorKind::Theorem3 => Selector::Theorem3,
        SelectorKind::Corollary4 => Selector::Corollary4 {
            d0: spec.d0.ok_or_else(|| missing("--d0", "corollary4"))?,
        },
    };
    scene.selector = Some(selector);
    scene.extensions = None;
    Ok(())
}

pub fn cmd_build(args: &BuildArgs) -> Result<Outcome, CliError> {
    let scene = scene_from_args(&args.polygon)?;
    let poly = scene.polygon.build()?;
    let built = BuiltPolygon::new(&poly, scene.polygon.labels.clone());
    emit(args.out.as_deref(), to_json(&built), EXIT_OK)
}

#[derive(Debug, Serialize)]
struct ReportJson {
    passed: bool,
    max_residual: f64,
    tolerance: f64,
    details: BTreeMap<String, f64>,
}

impl From<&CheckReport> for ReportJson {
    fn from(r: &CheckReport) -> Self {
        ReportJson {
            passed: r.passed,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            details: r.details.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct CircleJson {
    center: [f64; 2],
    radius: f64,
}

#[derive(Debug, Serialize)]
struct CheckJson {
    passed: bool,
    n: usize,
    extensions: Vec<f64>,
    /// `null` for even polygons, which have no sufficient condition.
    condition: Option<ReportJson>,
    concyclic: ReportJson,
    oracle: ReportJson,
    circle: CircleJson,
    chord_lengths: Vec<f64>,
    endpoints: Vec<[f64; 2]>,
}

pub fn cmd_check(args: &CheckArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    let mut scene = scene_from_args(&args.polygon)?;
    apply_spec_args(&mut scene, &args.spec)?;
    let resolved = scene.resolve()?;
    let (poly, spec) = (&resolved.polygon, &resolved.spec);
    let Verdicts {
        condition,
        concyclic,
        oracle,
    } = verify::evaluate(poly, spec, tol)?;
    let result = conway::conway_circle(poly, spec, tol)?;
    let passed = concyclic.passed && oracle.passed && condition.as_ref().is_none_or(|c| c.passed);
    let report = CheckJson {
        passed,
        n: poly.n(),
        extensions: spec.per_end().to_vec(),
        condition: condition.as_ref().map(ReportJson::from),
        concyclic: (&concyclic).into(),
        oracle: (&oracle).into(),
        circle: CircleJson {
            center: xy(result.circle.center),
            radius: result.circle.radius,
        },
        chord_lengths: result.chord_lengths.clone(),
        endpoints: result.endpoints.iter().copied().map(xy).collect(),
    };
    let code = if passed { EXIT_OK } else { EXIT_CHECK_FAILED };
    emit(args.out.as_deref(), to_json(&report), code)
}

pub fn cmd_render(args: &RenderArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    let mut scene = scene_from_args(&args.polygon)?;
    apply_spec_args(&mut scene, &args.spec)?;
    let mut options = scene.render;
    if let Some(size) = args.size {
        options.size = size;
    }
    if let Some(stroke) = args.stroke {
        options.stroke = stroke;
    }
    options.labels &= !args.no_labels;
    validate_render_options(&options)?;
    let resolved = scene.resolve()?;
    let result = conway::conway_circle(&resolved.polygon, &resolved.spec, tol)?;
    let doc = svg::render(&resolved.polygon, &result, &resolved.labels, &options);
    emit(args.out.as_deref(), doc, EXIT_OK)
}

fn validate_render_options(options: &RenderOptions) -> Result<(), CliError> {
    if !(options.size.is_finite() && options.size > 0.0)
        || !(options.stroke.is_finite() && options.stroke > 0.0)
    {
        return Err(CliError::new(
            "invalid_argument",
            format!(
                "size and stroke must be positive, got {} and {}",
                options.size, options.stroke
            ),
        ));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct FuzzJson<'a> {
    config: &'a FuzzConfig,
    tolerance: &'a Tolerance,
    summary: &'a conway_core::FuzzSummary,
}

pub fn cmd_fuzz(args: &FuzzArgs, tol: &Tolerance) -> Result<Outcome, CliError> {
    let mut config = if args.even {
        FuzzConfig::even(args.seed, args.trials)
    } else {
        FuzzConfig::odd(args.seed, args.trials)
    };
    if let Some(max_n) = args.max_n {
        config.n_range.1 = max_n;
    }
    if let Some(p) = args.perturbation {
        config.perturbation = p;
    }
    let summary = verify::fuzz_iff(&config, tol)?;
    let code = if summary.disagreements == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let doc = FuzzJson {
        config: &config,
        tolerance: tol,
        summary: &summary,
    };
    emit(args.out.as_deref(), to_json(&doc), code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("conway").chain(args.iter().copied()))
    }

    #[test]
    fn parses_vertex_lists() {
        assert_eq!(
            parse_vertices("0,0;1,0;0,1").unwrap(),
            VertexList(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        );
        assert!(parse_vertices("0,0;1").is_err());
        assert!(parse_vertices("0,x").is_err());
    }

    #[test]
    fn parameters_without_selector_are_rejected() {
        let out = run_args(&["check", "--sides", "3,4,5", "--x-a", "1"]);
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stdout.contains("invalid_argument"));
    }

    #[test]
    fn selector_needs_its_parameter() {
        let out = run_args(&["check", "--sides", "3,4,5", "--selector", "theorem1"]);
        assert_eq!(out.code, EXIT_INVALID);
        assert!(out.stdout.contains("missing_parameter"));
    }

    #[test]
    fn help_exits_zero() {
        let out = run_args(&["--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("build"));
    }

    #[test]
    fn bad_render_options() {
        let out = run_args(&["render", "--sides", "3,4,5", "--size", "0"]);
        assert_eq!(out.code, EXIT_INVALID);
    }
}
