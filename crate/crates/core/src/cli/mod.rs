//! Command-line front end: spec parsing, job dispatch and report writers.
//!
//! Every command prints a human-readable report and can write a
//! machine-readable one with `--out` (JSON by default, or CSV/SVG where the
//! command has a tabular or graphical output). Exit statuses: 0 on converged
//! success, 2 for invalid input, 3 when a computation did not converge or a
//! check failed, 4 for I/O errors.

pub mod svg;
mod table;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::conformal::{anomaly_check, check_inversion_invariance, InversionMap, InversionSpec};
use crate::curve::{CurveSpec, Topology};
use crate::error::{Error, Result};
use crate::kernel::{
    curve_number_closed, curve_number_open, kernel_grid, write_kernel_csv, ClosedOptions,
    OpenOptions,
};
use crate::minkowski::{
    boost, photon_number, spectral_photon_number, write_spectrum_csv, PhotonOptions,
    SpectralOptions, WorldLine,
};
use crate::optimize::{minimize, write_trace_csv, OptimizeOptions};
use crate::quadrature::QuadratureResult;

pub use svg::export_plot;
pub use table::{ellipse_table, strictly_increasing, table_tolerance, TableRow, REFERENCE_TABLE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Default tolerance of the inversion-invariance check.
pub const INVARIANCE_TOL: f64 = 1e-6;
/// Default absolute tolerance of the anomaly check.
pub const ANOMALY_TOL: f64 = 1e-3;
/// Points per side of the kernel grid written as CSV.
pub const KERNEL_CSV_GRID: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "curvn", version, about = "Transverse-tangent curve numbers and photon counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Run a JSON job document instead of a subcommand.
    #[arg(long)]
    pub job: Option<PathBuf>,

    /// Convergence (or check) tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Largest quadrature grid per side.
    #[arg(long, global = true)]
    pub max_grid: Option<usize>,

    /// Starting half-width of the window for open curves and worldlines.
    #[arg(long, global = true)]
    pub window: Option<f64>,

    /// Where to write the machine-readable output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Format of `--out`; inferred from its extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Iteration cap for `minimize`.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,

    /// CSV file for the `minimize` trace.
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// n of a closed curve.
    Eval { input: PathBuf },
    /// n of an open curve.
    EvalOpen { input: PathBuf },
    /// n/2 for the published ellipses.
    Table,
    /// Inversion invariance of n ({"source", "center", "radius"}).
    Invert { input: PathBuf },
    /// n_closed - n_open for an inversion centred on the curve.
    Anomaly { input: PathBuf },
    /// Photon number of a worldline, with the spectral cross-check.
    Photon { input: PathBuf },
    /// Photon number before and after a boost ({"worldline", "beta"}).
    Boost { input: PathBuf },
    /// Minimize n from a starting Fourier loop.
    Minimize { input: PathBuf },
    /// SVG plot of a curve captioned with its n.
    Export { input: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Eval,
    EvalOpen,
    Table,
    Invert,
    Anomaly,
    Photon,
    Boost,
    Minimize,
    Export,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Eval => "eval",
            CommandKind::EvalOpen => "eval-open",
            CommandKind::Table => "table",
            CommandKind::Invert => "invert",
            CommandKind::Anomaly => "anomaly",
            CommandKind::Photon => "photon",
            CommandKind::Boost => "boost",
            CommandKind::Minimize => "minimize",
            CommandKind::Export => "export",
        }
    }
}

/// One fully specified invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: CommandKind) -> Self {
        JobSpec {
            command,
            input: None,
            tol: None,
            max_grid: None,
            window: None,
            out: None,
            format: None,
            max_iter: None,
            trace: None,
        }
    }

    fn check(&self) -> Result<()> {
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::spec("tol", format!("must be finite and > 0, got {tol}")));
            }
        }
        if let Some(w) = self.window {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::spec("window", format!("must be finite and > 0, got {w}")));
            }
        }
        if let Some(g) = self.max_grid {
            if g < 4 {
                return Err(Error::spec("max_grid", format!("must be at least 4, got {g}")));
            }
        }
        let needs_input = self.command != CommandKind::Table;
        if needs_input && self.input.is_none() {
            return Err(Error::spec(
                "input",
                format!("command `{}` needs an input document", self.command.name()),
            ));
        }
        Ok(())
    }

    /// The `--format` value, or the one implied by the extension of `--out`.
    pub fn output_format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self
            .out
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some("csv") => Format::Csv,
            Some("svg") => Format::Svg,
            Some("txt") => Format::Text,
            _ => Format::Json,
        }
    }
}

impl Cli {
    /// Builds the job described by the arguments, reading `--job` if given.
    /// Flags on the command line override fields of the job document.
    pub fn into_job(self) -> Result<JobSpec> {
        let mut job = match (self.command, &self.job) {
            (Some(_), Some(_)) => {
                return Err(Error::spec("job", "give either a subcommand or --job, not both"))
            }
            (None, None) => {
                return Err(Error::spec("command", "a subcommand or --job is required"))
            }
            (None, Some(path)) => {
                let mut job = parse_job(&read(path)?)?;
                // relative paths in a job document are relative to the document
                let base = path.parent().unwrap_or(Path::new(""));
                for p in [&mut job.input, &mut job.out, &mut job.trace].into_iter().flatten() {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
                job
            }
            (Some(cmd), None) => {
                let (command, input) = match cmd {
                    Command::Eval { input } => (CommandKind::Eval, Some(input)),
                    Command::EvalOpen { input } => (CommandKind::EvalOpen, Some(input)),
                    Command::Table => (CommandKind::Table, None),
                    Command::Invert { input } => (CommandKind::Invert, Some(input)),
                    Command::Anomaly { input } => (CommandKind::Anomaly, Some(input)),
                    Command::Photon { input } => (CommandKind::Photon, Some(input)),
                    Command::Boost { input } => (CommandKind::Boost, Some(input)),
                    Command::Minimize { input } => (CommandKind::Minimize, Some(input)),
                    Command::Export { input } => (CommandKind::Export, Some(input)),
                };
                JobSpec {
                    input,
                    ..JobSpec::new(command)
                }
            }
        };
        job.tol = self.tol.or(job.tol);
        job.max_grid = self.max_grid.or(job.max_grid);
        job.window = self.window.or(job.window);
        job.out = self.out.or(job.out);
        job.format = self.format.or(job.format);
        job.max_iter = self.max_iter.or(job.max_iter);
        job.trace = self.trace.or(job.trace);
        Ok(job)
    }
}

/// Any document the CLI reads.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Curve(CurveSpec),
    WorldLine(WorldLine),
    Job(JobSpec),
}

const WORLDLINE_KINDS: [&str; 5] = ["inertial", "wiggle", "kick", "moved", "boosted"];

/// Parses a curve spec, worldline spec or job document, telling them apart by
/// a `command` field (jobs) or the `kind` tag.
pub fn parse_spec(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let Some(obj) = value.as_object() else {
        return Err(Error::spec("document", "expected a JSON object"));
    };
    if obj.contains_key("command") {
        return parse_job(text).map(Document::Job);
    }
    match obj.get("kind").and_then(|k| k.as_str()) {
        Some(kind) if WORLDLINE_KINDS.contains(&kind) => parse_worldline(text).map(Document::WorldLine),
        Some(_) => parse_curve(text).map(Document::Curve),
        None => Err(Error::spec("kind", "missing; every curve and worldline needs a `kind`")),
    }
}

/// Parses and range-checks a curve spec.
pub fn parse_curve(text: &str) -> Result<CurveSpec> {
    let curve: CurveSpec = serde_json::from_str(text)?;
    curve.check_parameters()?;
    Ok(curve)
}

/// Parses and checks a worldline spec.
pub fn parse_worldline(text: &str) -> Result<WorldLine> {
    let w: WorldLine = serde_json::from_str(text)?;
    w.check()?;
    Ok(w)
}

pub fn parse_job(text: &str) -> Result<JobSpec> {
    let job: JobSpec = serde_json::from_str(text)?;
    job.check()?;
    Ok(job)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostSpec {
    pub worldline: WorldLine,
    pub beta: [f64; 3],
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot read {}: {e}", path.display()),
        ))
    })
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot write {}: {e}", path.display()),
        ))
    })
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Penalty(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_INVALID,
    }
}

/// Result of a job: exit status and the human-readable report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub text: String,
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

/// Serializes a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

fn unsupported(job: &JobSpec, format: Format) -> Error {
    Error::spec(
        "format",
        format!("{format:?} output is not available for `{}`", job.command.name()).to_lowercase(),
    )
}

#[derive(Serialize)]
struct NumberReport<'a, T: Serialize> {
    command: &'static str,
    input: &'a T,
    n: f64,
    error_estimate: f64,
    grid_size: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_estimate: Option<f64>,
    trace: &'a [crate::quadrature::TraceEntry],
}

impl<'a, T: Serialize> NumberReport<'a, T> {
    fn new(command: &'static str, input: &'a T, r: &'a QuadratureResult) -> Self {
        NumberReport {
            command,
            input,
            n: r.value,
            error_estimate: r.error_estimate,
            grid_size: r.grid_size,
            converged: r.converged,
            window: r.window,
            tail_estimate: r.tail_estimate,
            trace: &r.trace,
        }
    }
}

fn describe(r: &QuadratureResult) -> String {
    let mut t = String::new();
    writeln!(t, "n              = {:.12}", r.value).ok();
    writeln!(t, "n / 2          = {:.12}", r.value / 2.0).ok();
    writeln!(t, "error estimate = {:.3e}", r.error_estimate).ok();
    writeln!(t, "grid           = {}", r.grid_size).ok();
    if let Some(w) = r.window {
        writeln!(t, "window         = {w}").ok();
    }
    if let Some(tail) = r.tail_estimate {
        writeln!(t, "tail estimate  = {tail:.3e}").ok();
    }
    writeln!(t, "converged      = {}", r.converged).ok();
    t
}

fn closed_options(job: &JobSpec) -> ClosedOptions {
    let mut o = ClosedOptions::default();
    o.tol = job.tol.unwrap_or(o.tol);
    o.max_grid = job.max_grid.unwrap_or(o.max_grid);
    o
}

fn open_options(job: &JobSpec) -> OpenOptions {
    let mut o = OpenOptions::default();
    o.tol = job.tol.unwrap_or(o.tol);
    o.max_grid = job.max_grid.unwrap_or(o.max_grid);
    if let Some(w) = job.window {
        o.window.initial = w;
    }
    o
}

fn curve_number_for(curve: &CurveSpec, job: &JobSpec) -> Result<QuadratureResult> {
    if curve.is_closed() {
        curve_number_closed(curve, &closed_options(job))
    } else {
        curve_number_open(curve, &open_options(job))
    }
}

/// Runs a job, writing any requested output files.
pub fn run(job: &JobSpec) -> Result<Outcome> {
    job.check()?;
    let format = job.output_format();
    let input = || -> Result<String> { read(job.input.as_deref().expect("checked by JobSpec::check")) };
    let emit = |bytes: &[u8]| -> Result<()> {
        match &job.out {
            Some(path) => write(path, bytes),
            None => Ok(()),
        }
    };

    match job.command {
        CommandKind::Eval | CommandKind::EvalOpen => {
            let curve = parse_curve(&input()?)?;
            let (r, name) = if job.command == CommandKind::Eval {
                if !matches!(curve.topology(), Topology::Closed { .. }) {
                    return Err(Error::Topology { expected: "closed" });
                }
                (curve_number_closed(&curve, &closed_options(job))?, "eval")
            } else {
                (curve_number_open(&curve, &open_options(job))?, "eval-open")
            };
            let text = describe(&r);
            match format {
                Format::Json => emit(to_json(&NumberReport::new(name, &curve, &r))?.as_bytes())?,
                Format::Text => emit(text.as_bytes())?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_kernel_csv(&kernel_grid(&curve, KERNEL_CSV_GRID)?, &mut buf)?;
                    emit(&buf)?;
                }
                Format::Svg => emit(export_plot(&curve, Some(r.value))?.as_bytes())?,
            }
            Ok(Outcome {
                status: status(r.converged),
                text,
            })
        }
        CommandKind::Table => {
            let rows = ellipse_table(&closed_options(job))?;
            let monotone = strictly_increasing(&rows);
            let ok = monotone && rows.iter().all(|r| r.converged && r.within_tolerance);
            let mut text = String::new();
            writeln!(text, "  ecc        n/2     ref  deviation  tolerance  ok").ok();
            for r in &rows {
                writeln!(
                    text,
                    "{:5.2} {:10.6} {:7.2} {:9.3}% {:9.0}%  {}",
                    r.ecc,
                    r.half_n,
                    r.reference,
                    100.0 * r.relative_deviation,
                    100.0 * r.tolerance,
                    if r.within_tolerance && r.converged { "yes" } else { "NO" }
                )
                .ok();
            }
            writeln!(text, "strictly increasing in ecc: {monotone}").ok();
            #[derive(Serialize)]
            struct TableReport<'a> {
                command: &'static str,
                rows: &'a [TableRow],
                strictly_increasing: bool,
                passed: bool,
            }
            match format {
                Format::Json => emit(
                    to_json(&TableReport {
                        command: "table",
                        rows: &rows,
                        strictly_increasing: monotone,
                        passed: ok,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                Format::Csv => {
                    let mut csv = String::from("ecc,n,half_n,reference,relative_deviation,tolerance,within_tolerance\n");
                    for r in &rows {
                        writeln!(
                            csv,
                            "{},{:.16e},{:.16e},{},{:.16e},{},{}",
                            r.ecc, r.n, r.half_n, r.reference, r.relative_deviation, r.tolerance, r.within_tolerance
                        )
                        .ok();
                    }
                    emit(csv.as_bytes())?;
                }
                Format::Svg => return Err(unsupported(job, format)),
            }
            Ok(Outcome {
                status: status(ok),
                text,
            })
        }
        CommandKind::Invert => {
            let spec: InversionSpec = serde_json::from_str(&input()?)?;
            let map = InversionMap::new(spec.center.clone(), spec.radius)?;
            let report = check_inversion_invariance(&spec.source, &map, job.tol.unwrap_or(INVARIANCE_TOL))?;
            let mut text = String::new();
            writeln!(text, "n(source)           = {:.12}", report.source.value).ok();
            writeln!(text, "n(image)            = {:.12}", report.image.value).ok();
            writeln!(text, "expected shift      = {:.12}", report.expected_shift).ok();
            writeln!(text, "relative difference = {:.3e}", report.relative_difference).ok();
            writeln!(text, "passed              = {}", report.passed).ok();
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                input: &'a InversionSpec,
                #[serde(flatten)]
                report: &'a crate::conformal::InvarianceReport,
            }
            match format {
                Format::Json => emit(
                    to_json(&Report {
                        command: "invert",
                        input: &spec,
                        report: &report,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                Format::Svg => {
                    let image: CurveSpec = crate::conformal::invert_curve(&spec.source, &map)?.into();
                    emit(export_plot(&image, Some(report.image.value))?.as_bytes())?
                }
                Format::Csv => return Err(unsupported(job, format)),
            }
            Ok(Outcome {
                status: status(report.passed),
                text,
            })
        }
        CommandKind::Anomaly => {
            let spec: InversionSpec = serde_json::from_str(&input()?)?;
            let map = InversionMap::new(spec.center.clone(), spec.radius)?;
            let report = anomaly_check(&spec.source, &map, job.tol.unwrap_or(ANOMALY_TOL))?;
            let mut text = String::new();
            writeln!(text, "n(closed)           = {:.12}", report.closed.value).ok();
            writeln!(text, "n(open image)       = {:.12}", report.open.value).ok();
            writeln!(text, "difference          = {:.12}", report.difference).ok();
            writeln!(text, "2 pi^2              = {:.12}", report.expected).ok();
            writeln!(text, "deviation           = {:.3e}", report.deviation).ok();
            writeln!(text, "passed              = {}", report.passed).ok();
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                input: &'a InversionSpec,
                #[serde(flatten)]
                report: &'a crate::conformal::AnomalyReport,
            }
            match format {
                Format::Json => emit(
                    to_json(&Report {
                        command: "anomaly",
                        input: &spec,
                        report: &report,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                _ => return Err(unsupported(job, format)),
            }
            Ok(Outcome {
                status: status(report.passed),
                text,
            })
        }
        CommandKind::Photon => {
            let w = parse_worldline(&input()?)?;
            let mut opts = PhotonOptions::default();
            opts.tol = job.tol.unwrap_or(opts.tol);
            opts.max_intervals = job.max_grid.unwrap_or(opts.max_intervals);
            if let Some(win) = job.window {
                opts.initial = win;
            }
            let count = photon_number(&w, &opts)?;
            let spectral = spectral_photon_number(&w, &SpectralOptions::default())?;
            let relative = if count.n == 0.0 && spectral.n == 0.0 {
                0.0
            } else {
                (count.n - spectral.n).abs() / count.n.abs().max(spectral.n.abs())
            };
            let mut text = describe(&count.quadrature);
            writeln!(text, "spectral n     = {:.12e}", spectral.n).ok();
            writeln!(text, "relative diff  = {relative:.3e}").ok();
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                input: &'a WorldLine,
                n: f64,
                quadrature: &'a QuadratureResult,
                spectral: &'a crate::minkowski::SpectralCount,
                relative_difference: f64,
            }
            match format {
                Format::Json => emit(
                    to_json(&Report {
                        command: "photon",
                        input: &w,
                        n: count.n,
                        quadrature: &count.quadrature,
                        spectral: &spectral,
                        relative_difference: relative,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_spectrum_csv(&spectral.spectrum, &mut buf)?;
                    emit(&buf)?;
                }
                Format::Svg => return Err(unsupported(job, format)),
            }
            Ok(Outcome {
                status: status(count.quadrature.converged),
                text,
            })
        }
        CommandKind::Boost => {
            let spec: BoostSpec = serde_json::from_str(&input()?)?;
            spec.worldline.check()?;
            let boosted = boost(&spec.worldline, spec.beta)?;
            let mut opts = PhotonOptions::default();
            opts.tol = job.tol.unwrap_or(opts.tol);
            let before = photon_number(&spec.worldline, &opts)?;
            let after = photon_number(&boosted, &opts)?;
            let relative = if before.n == 0.0 && after.n == 0.0 {
                0.0
            } else {
                (after.n - before.n).abs() / before.n.abs().max(after.n.abs())
            };
            let mut text = String::new();
            writeln!(text, "n (original)    = {:.12e}", before.n).ok();
            writeln!(text, "n (boosted)     = {:.12e}", after.n).ok();
            writeln!(text, "relative change = {relative:.3e}").ok();
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                input: &'a BoostSpec,
                n_original: f64,
                n_boosted: f64,
                relative_change: f64,
                converged: bool,
            }
            let converged = before.quadrature.converged && after.quadrature.converged;
            match format {
                Format::Json => emit(
                    to_json(&Report {
                        command: "boost",
                        input: &spec,
                        n_original: before.n,
                        n_boosted: after.n,
                        relative_change: relative,
                        converged,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                _ => return Err(unsupported(job, format)),
            }
            Ok(Outcome {
                status: status(converged),
                text,
            })
        }
        CommandKind::Minimize => {
            let curve = parse_curve(&input()?)?;
            let CurveSpec::FourierLoop(initial) = curve else {
                return Err(Error::spec("kind", "minimize starts from a `fourier-loop`"));
            };
            if initial.dimension() != 2 {
                return Err(Error::spec("a", "minimize works on plane loops"));
            }
            let mut opts = OptimizeOptions::default();
            opts.tol = job.tol.unwrap_or(opts.tol);
            opts.max_iter = job.max_iter.unwrap_or(opts.max_iter);
            let (best, trace) = minimize(&initial, &opts)?;
            let final_curve = CurveSpec::FourierLoop(best);
            let initial_n = trace.iterations.first().map_or(f64::NAN, |i| i.n);
            let mut text = String::new();
            writeln!(text, "initial n      = {initial_n:.12}").ok();
            writeln!(text, "final n        = {:.12}", trace.final_n()).ok();
            writeln!(text, "2 pi^2         = {:.12}", crate::CIRCLE_NUMBER).ok();
            writeln!(text, "iterations     = {}", trace.iterations.len() - 1).ok();
            writeln!(text, "termination    = {:?}", trace.termination).ok();
            if trace.conjecture_violation {
                writeln!(text, "CONJECTURE VIOLATION: final n is below 2 pi^2; study this loop").ok();
            }
            if let Some(path) = &job.trace {
                let mut buf = Vec::new();
                write_trace_csv(&trace, &mut buf)?;
                write(path, &buf)?;
            }
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                initial_n: f64,
                final_n: f64,
                final_curve: &'a CurveSpec,
                trace: &'a crate::optimize::OptimizationTrace,
            }
            match format {
                Format::Json => emit(
                    to_json(&Report {
                        command: "minimize",
                        initial_n,
                        final_n: trace.final_n(),
                        final_curve: &final_curve,
                        trace: &trace,
                    })?
                    .as_bytes(),
                )?,
                Format::Text => emit(text.as_bytes())?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_trace_csv(&trace, &mut buf)?;
                    emit(&buf)?;
                }
                Format::Svg => emit(export_plot(&final_curve, Some(trace.final_n()))?.as_bytes())?,
            }
            let ok = trace.termination == crate::optimize::Termination::GradientTolerance;
            Ok(Outcome {
                status: status(ok),
                text,
            })
        }
        CommandKind::Export => {
            let curve = parse_curve(&input()?)?;
            let r = curve_number_for(&curve, job)?;
            let svg = export_plot(&curve, Some(r.value))?;
            if !matches!(job.format, None | Some(Format::Svg)) {
                return Err(unsupported(job, format));
            }
            let text = match &job.out {
                Some(path) => {
                    write(path, svg.as_bytes())?;
                    format!("wrote {} (n = {:.4})\n", path.display(), r.value)
                }
                None => svg,
            };
            Ok(Outcome {
                status: status(r.converged),
                text,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let Document::Curve(c) = parse_spec(r#"{"kind":"circle","radius":1}"#).unwrap() else {
            panic!("expected a curve");
        };
        assert_eq!(c, CurveSpec::circle(1.0));

        let err = parse_spec(r#"{"kind":"ellipse","a":1,"ecc":1.2}"#).unwrap_err().to_string();
        assert!(err.contains("`ecc`") && err.contains("[0, 1)"), "{err}");

        let err = parse_spec(r#"{"kind":"circle","radius":1,"color":"red"}"#).unwrap_err().to_string();
        assert!(err.contains("color"), "{err}");
    }

    #[test]
    fn worldlines_and_jobs_are_recognized() {
        assert!(matches!(
            parse_spec(r#"{"kind":"wiggle","amplitude":0.01,"omega":1,"half_width":20}"#).unwrap(),
            Document::WorldLine(_)
        ));
        assert!(matches!(
            parse_spec(r#"{"command":"table"}"#).unwrap(),
            Document::Job(_)
        ));
        let err = parse_spec(r#"{"command":"eval"}"#).unwrap_err().to_string();
        assert!(err.contains("`input`"), "{err}");
        let err = parse_spec(r#"{"command":"table","speed":3}"#).unwrap_err().to_string();
        assert!(err.contains("speed"), "{err}");
    }

    #[test]
    fn superluminal_beta_names_the_problem() {
        let err = parse_spec(
            r#"{"kind":"boosted","beta":[1.0,0.0,0.0],"source":{"kind":"wiggle","amplitude":0.01,"omega":1,"half_width":5}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("beta"), "{err}");
    }

    #[test]
    fn format_follows_extension() {
        let mut job = JobSpec::new(CommandKind::Eval);
        assert_eq!(job.output_format(), Format::Json);
        job.out = Some("plot.svg".into());
        assert_eq!(job.output_format(), Format::Svg);
        job.format = Some(Format::Csv);
        assert_eq!(job.output_format(), Format::Csv);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), EXIT_IO);
        assert_eq!(exit_code(&Error::spec("ecc", "bad")), EXIT_INVALID);
    }
}
