//! Command-line front end. Each subcommand is a plain function returning an
//! [`Outcome`]; the binary only parses arguments and prints.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::axiom::{
    space_form_defect, theorem_check, CorollaryOutcome, TheoremOutcome, DEFAULT_SAMPLES,
};
use crate::catalog::{resolve_space, ChartDocument};
use crate::chart::{ChartMetric, Expected};
use crate::curvature::holomorphic_curvature;
use crate::error::Error;
use crate::linalg::{self, Vector};
use crate::submanifold::{ImmersedPatch, PatchDocument};
use crate::tensor::complex_space_form_tensor;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// Parameter points checked by `validate` besides the reference point.
const VALIDATE_SAMPLES: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "hermitian-lab",
    version,
    about = "Curvature and θ-plane checks on almost Hermitian charts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a chart or patch file against the structural invariants
    Validate { file: PathBuf },
    /// Scan the θ-plane conditions at a point and check the conclusion
    Axiom(AxiomArgs),
    /// Compare the space-form constant across sampled points
    Schur(SchurArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AxiomArgs {
    /// Catalog entry (`name[:p1[:p2]]`) or chart file
    pub space: String,
    /// Kähler angle, in radians unless --degrees
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to the chart tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub json: bool,
    /// Chart point, comma separated; defaults to the reference point
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub at: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SchurArgs {
    pub space: String,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error) -> Self {
        Self {
            code: exit_code(err),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Usage and input problems map to 2, everything else to 1.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidArgument(_)
        | Error::UnknownSpace(_)
        | Error::AngleOutOfRange { .. }
        | Error::OutsideDomain { .. }
        | Error::DimensionMismatch { .. }
        | Error::MissingStructure => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                Outcome::new(code, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(file),
        Command::Axiom(args) => axiom(args),
        Command::Schur(args) => schur(args),
    }
}

/// A float printed with 17 significant digits; NaN and infinities become null.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0))
                .map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

fn nums(v: impl IntoIterator<Item = f64>) -> Vec<Num> {
    v.into_iter().map(Num).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

// ---------------------------------------------------------------- validate

enum Definition {
    Chart(ChartMetric),
    Patch(ImmersedPatch),
}

fn load_definition(path: &Path) -> crate::Result<Definition> {
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str::<ChartDocument>(&text) {
        Ok(doc) => Ok(Definition::Chart(doc.into_chart()?)),
        Err(chart_err) => match serde_json::from_str::<PatchDocument>(&text) {
            Ok(doc) => Ok(Definition::Patch(doc.into_patch()?)),
            Err(_) => Err(chart_err.into()),
        },
    }
}

pub fn validate(path: &Path) -> Outcome {
    let def = match load_definition(path) {
        Ok(d) => d,
        Err(e) => return Outcome::error(&e),
    };
    match def {
        Definition::Chart(chart) => validate_chart(&chart),
        Definition::Patch(patch) => validate_patch(&patch),
    }
}

fn validate_chart(chart: &ChartMetric) -> Outcome {
    let tol = chart.tolerance();
    let mut points = vec![chart.reference_point()];
    points.extend(chart.sample_points(VALIDATE_SAMPLES, 0));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "chart {} (dim {}, tol {tol:e})",
        chart.name(),
        chart.dim()
    );
    let mut pass = true;
    for u in &points {
        let _ = writeln!(out, "point {}", fmt_vec(u));
        let residuals: crate::Result<(Vec<(&'static str, f64)>, f64)> = if chart.has_structure() {
            chart
                .coordinate_point(u)
                .and_then(|p| p.validate(tol))
                .map(|r| (r.residuals, r.min_eigenvalue))
        } else {
            chart.riemann_coordinates(u).map(|r| {
                let g = chart.metric_at(u);
                let mut named = vec![("metric_symmetry", linalg::symmetry_residual(&g))];
                named.extend(r.symmetry_residuals().named());
                (named, linalg::min_eigenvalue(&g))
            })
        };
        match residuals {
            Ok((named, min_eig)) => {
                for (name, value) in named {
                    let ok = value <= tol;
                    pass &= ok;
                    let _ = writeln!(
                        out,
                        "  {:<30} {value:.3e} {}",
                        name,
                        if ok { "ok" } else { "FAIL" }
                    );
                }
                let ok = min_eig > 0.0;
                pass &= ok;
                let _ = writeln!(
                    out,
                    "  {:<30} {min_eig:.3e} {}",
                    "min_eigenvalue",
                    if ok { "ok" } else { "FAIL" }
                );
            }
            Err(e) => {
                let code = exit_code(&e);
                if code == EXIT_USAGE {
                    return Outcome::error(&e);
                }
                pass = false;
                let _ = writeln!(out, "  FAIL: {e}");
            }
        }
    }
    if let Some(expected) = chart.expected() {
        let _ = writeln!(out, "expected {} at the reference point", expected.kind);
        match expected_checks(chart, expected) {
            Ok(checks) => {
                for (name, value, ok) in checks {
                    pass &= ok;
                    let _ = writeln!(
                        out,
                        "  {name:<30} {value:.3e} {}",
                        if ok { "ok" } else { "FAIL" }
                    );
                }
            }
            Err(e) => {
                if exit_code(&e) == EXIT_USAGE {
                    return Outcome::error(&e);
                }
                pass = false;
                let _ = writeln!(out, "  FAIL: {e}");
            }
        }
    }
    let _ = writeln!(out, "{}", if pass { "valid" } else { "invalid" });
    Outcome::new(if pass { EXIT_PASS } else { EXIT_FAIL }, out)
}

/// Residuals of the `expected` block. A missing `c` for a complex space form
/// is read off the holomorphic curvature of the first frame vector.
fn expected_checks(
    chart: &ChartMetric,
    expected: &Expected,
) -> crate::Result<Vec<(&'static str, f64, bool)>> {
    let tol = chart.tolerance();
    let u = chart.reference_point();
    let mut checks = Vec::new();
    match expected.kind.as_str() {
        "real_space_form" => {
            let d = space_form_defect(&chart.hermitian_point(&u)?)?;
            checks.push(("space_form_defect", d.defect_norm, d.defect_norm <= tol));
            if let Some(c) = expected.c {
                let err = (d.c_star - c).abs();
                checks.push(("space_form_constant", err, err <= tol));
            }
        }
        "complex_space_form" => {
            let p = chart.hermitian_point(&u)?;
            let c = match expected.c {
                Some(c) => c,
                None => holomorphic_curvature(&p, &linalg::basis_vector(p.dim(), 0))?,
            };
            let model = complex_space_form_tensor(c, p.g(), p.j())?;
            let err = p.curvature().sub(&model).max_abs();
            checks.push(("complex_space_form_deviation", err, err <= tol));
        }
        "none" => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown expected kind `{other}`"
            )))
        }
    }
    if let Some(kahler) = expected.kahler {
        let nabla_j = kahler_residual(chart, &u)?;
        checks.push(("nabla_j", nabla_j, (nabla_j <= tol) == kahler));
    }
    Ok(checks)
}

fn validate_patch(patch: &ImmersedPatch) -> Outcome {
    let tol = patch.ambient().tolerance();
    let t = patch.reference_point();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "patch {} (dim {} in {}), parameter point {}",
        patch.name(),
        patch.dim(),
        patch.ambient().name(),
        fmt_vec(&t)
    );
    let checks = (|| -> crate::Result<Vec<(&'static str, f64, f64)>> {
        let sff = patch.second_fundamental_form(&t)?;
        Ok(vec![
            ("sigma_symmetry", sff.symmetry_residual(), 1e-8),
            ("sigma_normality", sff.normality_residual(), 1e-6),
            ("codazzi", patch.max_codazzi_residual(&t)?, tol),
        ])
    })();
    let checks = match checks {
        Ok(c) => c,
        Err(e) if exit_code(&e) == EXIT_USAGE => return Outcome::error(&e),
        Err(e) => {
            let _ = writeln!(out, "  FAIL: {e}\ninvalid");
            return Outcome::new(EXIT_FAIL, out);
        }
    };
    let mut pass = true;
    for (name, value, limit) in checks {
        let ok = value <= limit;
        pass &= ok;
        let _ = writeln!(
            out,
            "  {name:<30} {value:.3e} {}",
            if ok { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "{}", if pass { "valid" } else { "invalid" });
    Outcome::new(if pass { EXIT_PASS } else { EXIT_FAIL }, out)
}

// ---------------------------------------------------------------- axiom

/// Points besides the evaluation point at which `∇J` is checked. A single
/// point is not enough: the conformal sphere chart has `∇J = 0` at its center.
const KAHLER_SAMPLES: usize = 4;

/// Largest `|∇J|` over `u` and a few seeded chart points.
pub fn kahler_residual(chart: &ChartMetric, u: &[f64]) -> crate::Result<f64> {
    let mut worst = chart.nabla_j_residual(u)?;
    for v in chart.sample_points(KAHLER_SAMPLES, 0) {
        worst = worst.max(chart.nabla_j_residual(&v)?);
    }
    Ok(worst)
}

#[derive(Serialize)]
struct RecordJson {
    eq1: Num,
    eq2: Num,
    eq3: Num,
    eq4: Num,
    eq5: Num,
    x: Vec<Num>,
    y: Vec<Num>,
}

#[derive(Serialize)]
struct AxiomJson {
    schema: u32,
    command: &'static str,
    space: String,
    point: Vec<Num>,
    theta: Num,
    samples: usize,
    seed: u64,
    tol: Num,
    holds: bool,
    max_residual: Num,
    max_derived_residual: Num,
    worst: RecordJson,
    c_star: Num,
    defect_norm: Num,
    nabla_j: Num,
    kahler: bool,
    theorem: &'static str,
    corollary: Option<&'static str>,
    pass: bool,
}

fn vec_nums(v: &Vector) -> Vec<Num> {
    nums(v.iter().copied())
}

pub fn axiom(args: &AxiomArgs) -> Outcome {
    match axiom_inner(args) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn axiom_inner(args: &AxiomArgs) -> crate::Result<Outcome> {
    let theta = if args.degrees {
        args.theta.to_radians()
    } else {
        args.theta
    };
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "theta = {theta} rad: the axiom is stated for 0 < θ < π/2 (θ = 0 and θ = π/2 are the holomorphic and antiholomorphic axioms)"
        )));
    }
    let chart = resolve_space(&args.space)?;
    let tol = args.tol.unwrap_or(chart.tolerance());
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let u = args.at.clone().unwrap_or_else(|| chart.reference_point());
    if u.len() != chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            found: u.len(),
        });
    }
    let point = chart.hermitian_point(&u)?;
    let nabla_j = kahler_residual(&chart, &u)?;
    let report = theorem_check(&point, theta, args.samples, args.seed, tol, Some(nabla_j))?;
    let pass = report.scan.holds && report.consistent();
    let theorem = match report.theorem {
        TheoremOutcome::Confirmed => "confirmed",
        TheoremOutcome::Violated => "violated",
        TheoremOutcome::Contrapositive { .. } => "contrapositive",
    };
    let corollary = report.corollary.map(|c| match c {
        CorollaryOutcome::Flat => "flat",
        CorollaryOutcome::Violated => "violated",
    });
    let w = &report.scan.worst;
    let code = if pass { EXIT_PASS } else { EXIT_FAIL };
    if args.json {
        let doc = AxiomJson {
            schema: SCHEMA,
            command: "axiom",
            space: args.space.clone(),
            point: nums(u.iter().copied()),
            theta: Num(theta),
            samples: report.scan.samples,
            seed: args.seed,
            tol: Num(tol),
            holds: report.scan.holds,
            max_residual: Num(report.scan.max_residual),
            max_derived_residual: Num(report.scan.max_derived_residual),
            worst: RecordJson {
                eq1: Num(w.eq1),
                eq2: Num(w.eq2),
                eq3: Num(w.eq3),
                eq4: Num(w.eq4),
                eq5: Num(w.eq5),
                x: vec_nums(&w.x),
                y: vec_nums(&w.y),
            },
            c_star: Num(report.defect.c_star),
            defect_norm: Num(report.defect.defect_norm),
            nabla_j: Num(nabla_j),
            kahler: report.kahler == Some(true),
            theorem,
            corollary,
            pass,
        };
        return Ok(Outcome::new(code, to_json(&doc)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "space        {} at {}", chart.name(), fmt_vec(&u));
    let _ = writeln!(
        out,
        "theta        {theta:.10} rad ({:.6} deg)",
        theta.to_degrees()
    );
    let _ = writeln!(
        out,
        "samples      {} (seed {}, tol {tol:e})",
        report.scan.samples, args.seed
    );
    let _ = writeln!(
        out,
        "axiom        {} (max |eq1|,|eq2| = {:.3e})",
        if report.scan.holds { "holds" } else { "fails" },
        report.scan.max_residual
    );
    let _ = writeln!(
        out,
        "worst        eq1 {:.6e}  eq2 {:.6e}  eq3 {:.6e}  eq4 {:.6e}  eq5 {:.6e}",
        w.eq1, w.eq2, w.eq3, w.eq4, w.eq5
    );
    let _ = writeln!(out, "c_star       {:.10}", report.defect.c_star);
    let _ = writeln!(out, "defect_norm  {:.3e}", report.defect.defect_norm);
    let _ = writeln!(
        out,
        "kahler       {} (max |∇J| = {nabla_j:.3e})",
        if report.kahler == Some(true) {
            "yes"
        } else {
            "no"
        }
    );
    let _ = writeln!(out, "theorem      {theorem}");
    if let Some(c) = corollary {
        let _ = writeln!(out, "corollary    {c}");
    }
    Ok(Outcome::new(code, out))
}

// ---------------------------------------------------------------- schur

#[derive(Serialize)]
struct SchurPointJson {
    point: Vec<Num>,
    c_star: Num,
    defect_norm: Num,
}

#[derive(Serialize)]
struct SchurJson {
    schema: u32,
    command: &'static str,
    space: String,
    seed: u64,
    tol: Num,
    points: Vec<SchurPointJson>,
    spread: Option<Num>,
    constant: bool,
    failed_point: Option<usize>,
}

pub fn schur(args: &SchurArgs) -> Outcome {
    match schur_inner(args) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn schur_inner(args: &SchurArgs) -> crate::Result<Outcome> {
    if args.points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 points, got {}",
            args.points
        )));
    }
    let chart = resolve_space(&args.space)?;
    let tol = args.tol.unwrap_or(chart.tolerance());
    let points = chart.sample_points(args.points, args.seed);
    let mut rows = Vec::with_capacity(points.len());
    let mut failed = None;
    for (i, u) in points.iter().enumerate() {
        let d = space_form_defect(&chart.hermitian_point(u)?)?;
        rows.push((u.clone(), d));
        if d.defect_norm > tol {
            failed = Some(i);
            break;
        }
    }
    let c: Vec<f64> = rows.iter().map(|(_, d)| d.c_star).collect();
    let spread = failed.is_none().then(|| {
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    });
    let constant = spread.is_some_and(|s| s <= tol);
    let code = if constant { EXIT_PASS } else { EXIT_FAIL };
    if args.json {
        let doc = SchurJson {
            schema: SCHEMA,
            command: "schur",
            space: args.space.clone(),
            seed: args.seed,
            tol: Num(tol),
            points: rows
                .iter()
                .map(|(u, d)| SchurPointJson {
                    point: nums(u.iter().copied()),
                    c_star: Num(d.c_star),
                    defect_norm: Num(d.defect_norm),
                })
                .collect(),
            spread: spread.map(Num),
            constant,
            failed_point: failed,
        };
        return Ok(Outcome::new(code, to_json(&doc)));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "space {} ({} points, seed {}, tol {tol:e})",
        chart.name(),
        args.points,
        args.seed
    );
    for (i, (u, d)) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {i:>3}  {}  c = {:.10}  defect {:.3e}",
            fmt_vec(u),
            d.c_star,
            d.defect_norm
        );
    }
    match (failed, spread) {
        (Some(i), _) => {
            let _ = writeln!(
                out,
                "point {i} at {} is not a real space form (defect {:.3e} > {tol:e})",
                fmt_vec(&rows[i].0),
                rows[i].1.defect_norm
            );
        }
        (None, Some(s)) => {
            let _ = writeln!(
                out,
                "spread {s:.3e}: {}",
                if constant { "constant" } else { "NOT constant" }
            );
        }
        (None, None) => {}
    }
    Ok(Outcome::new(code, out))
}
