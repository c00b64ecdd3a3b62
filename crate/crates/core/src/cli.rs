//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal or I/O failure, 2 parameter or usage
//! error, 3 budget exceeded, 4 `verify` found a violated exact inequality.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, Measurements, DEFAULT_C};
use crate::budget::Budget;
use crate::construct::{self, Family, KSymbolOptions};
use crate::error::{Error, Result};
use crate::measures::{self, Measure, Mode};
use crate::poly::Polynomial;
use crate::report::{emit_report, Format, ReportItem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "prsfam", version, about = "Pseudorandom sequence families: construction, measures and bounds")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a family and write it as a family file.
    Gen(GenArgs),
    /// Transpose a family file.
    Dual(DualArgs),
    /// Evaluate one measure on a family file.
    Measure(MeasureArgs),
    /// Compare measured values with the theoretical bounds.
    Verify(VerifyArgs),
    /// Check the Weil bound for one polynomial.
    Weil(WeilArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionArg {
    F1,
    F2,
    Ksym,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    construction: ConstructionArg,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    d: usize,
    /// Alphabet size for `ksym`.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Base polynomial for `f1`, coefficients highest degree first, e.g. `1,0,1,1,0,4`.
    #[arg(long)]
    base: Option<String>,
    /// `f2` over all monic irreducibles instead of the trace-zero ones.
    #[arg(long)]
    all_irreducible: bool,
    /// Build `ksym` even when gcd(k, (p^d-1)/(p-1)) != 1.
    #[arg(long)]
    allow_gcd_violation: bool,
    #[arg(long, default_value_t = Budget::ENUMERATION.limit)]
    enum_budget: u128,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DualArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Report file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// C, Phi, Phicirc, gamma, gammacirc or Gamma.
    #[arg(long)]
    measure: String,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Budget::MEASURE.limit)]
    budget: u128,
    /// Evaluate on the dual of the input family.
    #[arg(long)]
    dual: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Constant for the `<<` envelopes.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Largest order for the optional envelope measures.
    #[arg(long, default_value_t = 2)]
    max_ell: usize,
    #[arg(long, default_value_t = Budget::MEASURE.limit)]
    budget: u128,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct WeilArgs {
    /// Coefficients highest degree first, e.g. `1,0,1` for x^2 + 1.
    #[arg(long)]
    poly: String,
    #[arg(long)]
    p: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// As [`run`], with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    // Reports are buffered so the worker pool never touches the caller's streams.
    let mut buf = Vec::new();
    let outcome = match cli.threads {
        Some(0) => Err(Error::param("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli.command, &mut buf))),
        None => dispatch(&cli.command, &mut buf),
    };
    if let Err(e) = stdout.write_all(&buf).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "prsfam: cannot write report: {e}");
        return EXIT_INTERNAL;
    }
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "prsfam: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Domain(_) | Error::Parse { .. } => EXIT_PARAMETER,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Io { .. } | Error::Internal(_) => EXIT_INTERNAL,
    }
}

fn dispatch(command: &Command, stdout: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Gen(a) => gen(a).map(|_| EXIT_OK),
        Command::Dual(a) => {
            let fam = construct::read_family_file(&a.input)?;
            construct::write_family_file(&construct::dual(&fam), &a.out)?;
            Ok(EXIT_OK)
        }
        Command::Measure(a) => measure(a, stdout).map(|_| EXIT_OK),
        Command::Verify(a) => verify(a, stdout),
        Command::Weil(a) => {
            let h = parse_poly(&a.poly, a.p)?;
            let report = bounds::weil_check(&h, a.p)?;
            let violated = report.is_violation();
            write_report(&[report.into()], &a.output, stdout)?;
            Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
        }
    }
}

fn parse_poly(text: &str, p: u64) -> Result<Polynomial> {
    let coeffs = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| Error::param(format!("`{c}` is not a coefficient")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.iter().any(|&c| c >= p) {
        return Err(Error::param(format!("coefficients must lie in [0, {p})")));
    }
    Ok(Polynomial::from_high_first(&coeffs, p))
}

/// Accepts the canonical names plus lowercase aliases (`phi`, `big-gamma`, ...).
pub fn parse_measure(name: &str) -> Result<Measure> {
    if let Ok(m) = name.parse() {
        return Ok(m);
    }
    match name.to_ascii_lowercase().as_str() {
        "c" | "fc" | "f-complexity" => Ok(Measure::FComplexity),
        "phi" => Ok(Measure::Phi),
        "phicirc" | "phi-circ" => Ok(Measure::PhiCirc),
        "gamma-circ" => Ok(Measure::GammaCirc),
        "biggamma" | "big-gamma" => Ok(Measure::BigGamma),
        _ => name.parse(),
    }
}

fn gen(a: &GenArgs) -> Result<()> {
    let budget = Budget::new(a.enum_budget);
    let fam = match a.construction {
        ConstructionArg::F1 => {
            let base = a.base.as_deref().map(|b| parse_poly(b, a.p)).transpose()?;
            construct::family_f1(a.p, a.d, base.as_ref(), budget)?
        }
        ConstructionArg::F2 => construct::family_f2_with(a.p, a.d, !a.all_irreducible, budget)?,
        ConstructionArg::Ksym => {
            let options = KSymbolOptions {
                enforce_norm_gcd: !a.allow_gcd_violation,
            };
            construct::family_k_symbol(a.p, a.d, a.k, options, budget)?
        }
    };
    construct::write_family_file(&fam, &a.out)
}

fn write_report(items: &[ReportItem], out: &OutputArgs, stdout: &mut Vec<u8>) -> Result<()> {
    let format = out.format.into();
    match &out.out {
        Some(path) => {
            let io_err = |source| Error::Io {
                path: path.clone(),
                source,
            };
            let file = File::create(path).map_err(io_err)?;
            emit_report(items, format, BufWriter::new(file)).map_err(|e| with_path(e, path))
        }
        None => emit_report(items, format, stdout),
    }
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    }
}

fn measure(a: &MeasureArgs, stdout: &mut Vec<u8>) -> Result<()> {
    let measure = parse_measure(&a.measure)?;
    if measure.has_order() && a.ell == 0 {
        return Err(Error::param("--ell must be at least 1"));
    }
    let mode = match a.mode {
        ModeArg::Exact => Mode::Exact(Budget::new(a.budget)),
        ModeArg::Sampled => Mode::Sampled {
            samples: a.samples,
            seed: a.seed,
        },
    };
    let mut fam = construct::read_family_file(&a.input)?;
    if a.dual {
        fam = construct::dual(&fam);
    }
    let result = measures::evaluate(&fam, measure, a.ell, mode)?;
    write_report(&[result.into()], &a.output, stdout)
}

/// Measures `verify` computes besides the required ones.
fn optional_measures(fam: &Family, max_ell: usize) -> Vec<(bool, Measure, usize)> {
    use construct::Construction as C;
    let mut out = Vec::new();
    for ell in 1..=max_ell {
        match fam.construction() {
            C::F1 => {
                out.push((false, Measure::Phi, ell));
                out.push((true, Measure::Phi, ell));
            }
            C::F2 if fam.is_binary() => out.push((false, Measure::Phi, ell)),
            C::KSymbol => {
                out.push((false, Measure::Gamma, ell));
                out.push((true, Measure::GammaCirc, ell));
            }
            _ => {}
        }
    }
    if matches!(fam.construction(), C::F1) {
        out.push((true, Measure::FComplexity, 0));
    }
    out
}

fn verify(a: &VerifyArgs, stdout: &mut Vec<u8>) -> Result<i32> {
    if !a.c.is_finite() || a.c <= 0.0 {
        return Err(Error::param("--c must be a positive number"));
    }
    let mode = Mode::Exact(Budget::new(a.budget));
    let fam = construct::read_family_file(&a.input)?;
    let du = construct::dual(&fam);
    let mut wanted: Vec<(bool, Measure, usize)> = bounds::required_measures(&fam)
        .into_iter()
        .map(|(on_dual, m, ell)| (on_dual, m, ell.unwrap_or(0)))
        .collect();
    for extra in optional_measures(&fam, a.max_ell) {
        if !wanted.contains(&extra) {
            wanted.push(extra);
        }
    }
    let mut measurements = Measurements::default();
    let mut items: Vec<ReportItem> = Vec::new();
    for (on_dual, m, ell) in wanted {
        let target = if on_dual { &du } else { &fam };
        let result = measures::evaluate(target, m, ell, mode)?;
        items.push(result.clone().into());
        if on_dual {
            measurements.dual.push(result);
        } else {
            measurements.family.push(result);
        }
    }
    let reports = bounds::verify_family(&fam, &measurements, a.c)?;
    let violated = reports.iter().any(|r| r.is_violation());
    items.extend(reports.into_iter().map(ReportItem::from));
    write_report(&items, &a.output, stdout)?;
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}
