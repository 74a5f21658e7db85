//! Command line front end.
//!
//! Subcommands: `cheby` evaluates one polynomial value, `bounds` renders the
//! bound formulas at a point, `invert` prints inverse-series coefficients,
//! `verify` audits a grid and searches it empirically, `sweep` writes the
//! extremal table for a grid, and `audit` tabulates printed against derived
//! formulas with an optional empirical pass.
//!
//! Exit codes: 0 success, 1 usage errors, 2 domain or degeneracy errors,
//! 3 when an empirical maximum exceeds a derived bound by more than the
//! violation tolerance. `BIUNIV_THREADS` caps the worker pool; results do
//! not depend on it.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use std::path::{Path, PathBuf};

use crate::bounds::{audit, bound_set, AuditReport, FormulaSelect, FsReading};
use crate::chebyshev::{t_poly, u_poly, ChebyshevArg};
use crate::class_gsigma::ClassParams;
use crate::error::{Error, Result};
use crate::report::{audit_csv, bounds_csv, build_manifest, extremal_csv, render_document};
use crate::schwarz::AdmissibilityMode;
use crate::search::{apply_empirical, ExtremalReport, SearchConfig};
use crate::series::PowerSeries;

pub const DEFAULT_DELTA_SPEC: &str = "1,1.5,2,3";
pub const DEFAULT_T_SPEC: &str = "0.55:0.95:0.1";
pub const DEFAULT_M_SPEC: &str = "0,1,2";
pub const DEFAULT_R_SPEC: &str = "-1,0,0.5,1,2";

#[derive(Parser)]
#[command(name = "biuniv", version, about = "Coefficient-bound verification tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one Chebyshev polynomial value
    Cheby(ChebyArgs),
    /// Evaluate the bound formulas at a single parameter point
    Bounds(BoundsArgs),
    /// Invert a normalized series and print the inverse tail coefficients
    Invert(InvertArgs),
    /// Audit a grid and stress it with a seeded extremal search
    Verify(VerifyArgs),
    /// Write the extremal search table for a parameter grid
    Sweep(SweepArgs),
    /// Tabulate printed against derived formulas over a grid
    Audit(AuditArgs),
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    U,
    T,
}

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    match s {
        "U" | "u" => Ok(Kind::U),
        "T" | "t" => Ok(Kind::T),
        _ => Err(format!("unknown kind '{s}', expected U or T")),
    }
}

#[derive(Clone, Copy, Debug)]
enum OutputFormat {
    Json,
    Csv,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        _ => Err(format!("unknown format '{s}', expected json or csv")),
    }
}

fn parse_formula(s: &str) -> std::result::Result<FormulaSelect, String> {
    match s {
        "printed" => Ok(FormulaSelect::Printed),
        "derived" => Ok(FormulaSelect::Derived),
        "both" => Ok(FormulaSelect::Both),
        _ => Err(format!("unknown formula family '{s}', expected printed, derived, or both")),
    }
}

#[derive(Clone, Copy, Debug)]
enum ModeSelect {
    Paper,
    Schur,
    Both,
}

impl ModeSelect {
    fn modes(self) -> Vec<AdmissibilityMode> {
        match self {
            Self::Paper => vec![AdmissibilityMode::Paper],
            Self::Schur => vec![AdmissibilityMode::Schur],
            Self::Both => vec![AdmissibilityMode::Paper, AdmissibilityMode::Schur],
        }
    }
}

fn parse_mode(s: &str) -> std::result::Result<ModeSelect, String> {
    match s {
        "paper" => Ok(ModeSelect::Paper),
        "schur" => Ok(ModeSelect::Schur),
        "both" => Ok(ModeSelect::Both),
        _ => Err(format!("unknown mode '{s}', expected paper, schur, or both")),
    }
}

#[derive(Args)]
struct ChebyArgs {
    /// Polynomial kind: U (second kind) or T (first kind)
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    /// Degree
    #[arg(long)]
    n: u32,
    /// Argument, |t| < 1
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    m: u32,
    /// Fekete-Szego weights: comma list and/or start:stop:step ranges
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Formula family: printed, derived, or both
    #[arg(long, default_value = "both", value_parser = parse_formula)]
    formula: FormulaSelect,
    /// Output format: json or csv
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: OutputFormat,
    /// Keep the division in the printed large-sigma branch instead of the
    /// continuous reading
    #[arg(long)]
    fs_branch_literal: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InvertArgs {
    /// Tail coefficients a2,a3,... of z + a2 z^2 + ...
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Highest inverse coefficient to print, at least 2
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct GridArgs {
    /// delta values: comma list and/or start:stop:step ranges
    /// (default depends on the subcommand)
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// t values (default depends on the subcommand)
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// m values, nonnegative integers (default depends on the subcommand)
    #[arg(long)]
    m: Option<String>,
    /// Fekete-Szego weights
    #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_R_SPEC)]
    r: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Random draws per extremal task (default depends on the subcommand)
    #[arg(long)]
    samples: Option<u64>,
    /// Master seed; every task seed derives from it
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Admissibility mode: paper, schur, or both
    /// (default depends on the subcommand)
    #[arg(long, value_parser = parse_mode)]
    mode: Option<ModeSelect>,
    /// Pattern-search rounds after sampling
    #[arg(long, default_value_t = 200)]
    refine_steps: u32,
    /// Step shrink factor per round, strictly between 0 and 1
    #[arg(long, default_value_t = 0.95)]
    refine_shrink: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the document to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Output stem; writes STEM.json and STEM.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Output stem; writes STEM.json and STEM.csv instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse a grid spec: comma-separated scalars and start:stop:step ranges.
/// Range values are snapped to 12 decimals so decimal steps land exactly.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Domain(format!("empty entry in value list '{spec}'")));
        }
        match split_range(token) {
            Some((start, stop, step)) => {
                let start = parse_f64(start)?;
                let stop = parse_f64(stop)?;
                let step = parse_f64(step)?;
                if !(step > 0.0) {
                    return Err(Error::Domain(format!(
                        "range '{token}' needs a positive step"
                    )));
                }
                if stop < start {
                    return Err(Error::Domain(format!(
                        "range '{token}' runs backwards"
                    )));
                }
                let mut k = 0u64;
                loop {
                    let v = snap(start + step * k as f64);
                    if v > stop + 1e-9 {
                        break;
                    }
                    out.push(v);
                    k += 1;
                    if k > 1_000_000 {
                        return Err(Error::Domain(format!("range '{token}' is too long")));
                    }
                }
            }
            None => out.push(parse_f64(token)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Domain(format!("no values in '{spec}'")));
    }
    Ok(out)
}

/// Split start:stop:step, leaving lone scalars (no colon) alone.
fn split_range(token: &str) -> Option<(&str, &str, &str)> {
    let (start, rest) = token.split_once(':')?;
    let (stop, step) = rest.split_once(':')?;
    Some((start, stop, step))
}

fn parse_f64(token: &str) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("'{token}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("'{token}' is not finite")));
    }
    Ok(v)
}

fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Like [`parse_values`] but requires nonnegative integers.
pub fn parse_m_values(spec: &str) -> Result<Vec<u32>> {
    parse_values(spec)?
        .into_iter()
        .map(|v| {
            if v.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&v) {
                Ok(v as u32)
            } else {
                Err(Error::Domain(format!(
                    "'{v}' is not a nonnegative integer m value"
                )))
            }
        })
        .collect()
}

/// Simple comma list of reals, no ranges.
fn parse_plain_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',').map(parse_f64).collect()
}

fn build_grid(deltas: &[f64], ts: &[f64], ms: &[u32]) -> Result<Vec<ClassParams>> {
    let mut points = Vec::with_capacity(deltas.len() * ts.len() * ms.len());
    for &delta in deltas {
        for &t in ts {
            for &m in ms {
                points.push(ClassParams::new(delta, t, m)?);
            }
        }
    }
    Ok(points)
}

/// The grid the sweep and audit subcommands use when no flags are given.
pub fn default_grid() -> Vec<ClassParams> {
    let deltas = parse_values(DEFAULT_DELTA_SPEC).expect("default delta spec");
    let ts = parse_values(DEFAULT_T_SPEC).expect("default t spec");
    let ms = parse_m_values(DEFAULT_M_SPEC).expect("default m spec");
    build_grid(&deltas, &ts, &ms).expect("default grid is in-domain")
}

fn join_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn grid_label(deltas: &[f64], ts: &[f64], ms: &[u32], rs: &[f64]) -> String {
    let ms = ms
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "delta={};t={};m={};r={}",
        join_values(deltas),
        join_values(ts),
        ms,
        join_values(rs)
    )
}

/// %g-style rendering with `digits` significant digits: trailing zeros
/// trimmed, scientific notation outside the usual exponent window.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent parses");
    if exp < -4 || exp >= digits as i32 {
        return format!("{}e{:+03}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if !s.contains('.') {
        return s;
    }
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn emit(text: String, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn init_threads() {
    let Ok(raw) = std::env::var("BIUNIV_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n >= 1 => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => eprintln!(
            "warning: BIUNIV_THREADS={raw} is not a positive integer; using the default pool"
        ),
    }
}

/// Entry point for the binary: parses `std::env::args` and returns the
/// process exit code.
pub fn run() -> i32 {
    run_with(std::env::args().collect())
}

/// Same as [`run`] for an explicit argv (first element is the binary name).
pub fn run_with(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    init_threads();
    let command_line = argv.join(" ");
    match dispatch(cli.command, &command_line) {
        Ok(true) => 3,
        Ok(false) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn dispatch(command: Command, command_line: &str) -> Result<bool> {
    match command {
        Command::Cheby(args) => cmd_cheby(args),
        Command::Bounds(args) => cmd_bounds(args, command_line),
        Command::Invert(args) => cmd_invert(args),
        Command::Verify(args) => cmd_verify(args, command_line),
        Command::Sweep(args) => cmd_sweep(args, command_line),
        Command::Audit(args) => cmd_audit(args, command_line),
    }
}

fn cmd_cheby(args: ChebyArgs) -> Result<bool> {
    let t = ChebyshevArg::new(args.t)?;
    let value = match args.kind {
        Kind::U => u_poly(args.n, t),
        Kind::T => t_poly(args.n, t),
    };
    println!("{}", fmt_sig(value, 15));
    Ok(false)
}

fn cmd_bounds(args: BoundsArgs, command_line: &str) -> Result<bool> {
    let params = ClassParams::new(args.delta, args.t, args.m)?;
    let reading = if args.fs_branch_literal {
        FsReading::Literal
    } else {
        FsReading::Continuous
    };
    let rs = match &args.r {
        Some(spec) => Some(parse_values(spec)?),
        None => None,
    };
    let sets = match &rs {
        Some(rs) => rs
            .iter()
            .map(|&r| bound_set(&params, Some(r), reading, args.formula))
            .collect::<Result<Vec<_>>>()?,
        None => vec![bound_set(&params, None, reading, args.formula)?],
    };
    let text = match args.format {
        OutputFormat::Csv => bounds_csv(&sets),
        OutputFormat::Json => {
            let mut grid = format!("delta={};t={};m={}", args.delta, args.t, args.m);
            if let Some(rs) = &rs {
                grid.push_str(";r=");
                grid.push_str(&join_values(rs));
            }
            let manifest =
                build_manifest(command_line.to_string(), None, Some(grid), &sets, None);
            render_document(&manifest, &sets)
        }
    };
    emit(text, args.out.as_deref())?;
    Ok(false)
}

fn cmd_invert(args: InvertArgs) -> Result<bool> {
    if args.order < 2 {
        return Err(Error::Domain("order must be at least 2".into()));
    }
    let tail = parse_plain_list(&args.coeffs)?;
    if tail.len() > args.order - 1 {
        return Err(Error::Domain(format!(
            "{} coefficients do not fit below order {}",
            tail.len(),
            args.order
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    coeffs.extend(tail.iter().map(|&c| Complex64::new(c, 0.0)));
    coeffs.resize(args.order + 1, Complex64::new(0.0, 0.0));
    let inverse = PowerSeries::new(coeffs).reverse()?;
    let parts: Vec<String> = (2..=args.order)
        .map(|k| fmt_sig(inverse.coeff(k).re, 15))
        .collect();
    println!("{}", parts.join(", "));
    Ok(false)
}

#[derive(Serialize)]
struct VerifyRecords {
    audit: AuditReport,
    extremal: Vec<ExtremalReport>,
}

struct ResolvedGrid {
    deltas: Vec<f64>,
    ts: Vec<f64>,
    ms: Vec<u32>,
    rs: Vec<f64>,
    points: Vec<ClassParams>,
}

/// Grid specs fall back to per-subcommand defaults: verify pins a single
/// reference point, sweep and audit cover the default grid.
fn resolve_grid(grid: &GridArgs, defaults: [&str; 3]) -> Result<ResolvedGrid> {
    let deltas = parse_values(grid.delta.as_deref().unwrap_or(defaults[0]))?;
    let ts = parse_values(grid.t.as_deref().unwrap_or(defaults[1]))?;
    let ms = parse_m_values(grid.m.as_deref().unwrap_or(defaults[2]))?;
    let rs = parse_values(&grid.r)?;
    let points = build_grid(&deltas, &ts, &ms)?;
    Ok(ResolvedGrid {
        deltas,
        ts,
        ms,
        rs,
        points,
    })
}

const POINT_DEFAULTS: [&str; 3] = ["1", "0.75", "0"];
const GRID_DEFAULTS: [&str; 3] = [DEFAULT_DELTA_SPEC, DEFAULT_T_SPEC, DEFAULT_M_SPEC];

impl ResolvedGrid {
    fn label(&self) -> String {
        grid_label(&self.deltas, &self.ts, &self.ms, &self.rs)
    }
}

fn search_config(
    search: &SearchArgs,
    mode: AdmissibilityMode,
    default_samples: u64,
) -> SearchConfig {
    SearchConfig {
        samples: search.samples.unwrap_or(default_samples),
        seed: search.seed,
        mode,
        refine_steps: search.refine_steps,
        refine_shrink: search.refine_shrink,
    }
}

fn cmd_verify(args: VerifyArgs, command_line: &str) -> Result<bool> {
    let grid = resolve_grid(&args.grid, POINT_DEFAULTS)?;
    let mut report = audit(&grid.points, &grid.rs)?;
    let mut extremal = Vec::new();
    let mut violated = false;
    for mode in args.search.mode.unwrap_or(ModeSelect::Both).modes() {
        let config = search_config(&args.search, mode, 100_000);
        let runs = crate::search::sweep(&grid.points, &grid.rs, &config)?;
        apply_empirical(&mut report, &runs);
        violated |= runs.iter().any(|r| r.violation_derived);
        extremal.extend(runs);
    }
    let records = VerifyRecords {
        audit: report,
        extremal,
    };
    let manifest = build_manifest(
        command_line.to_string(),
        Some(args.search.seed),
        Some(grid.label()),
        &records,
        None,
    );
    emit(render_document(&manifest, &records), args.out.as_deref())?;
    Ok(violated)
}

fn cmd_sweep(args: SweepArgs, command_line: &str) -> Result<bool> {
    let grid = resolve_grid(&args.grid, GRID_DEFAULTS)?;
    let mut runs = Vec::new();
    for mode in args.search.mode.unwrap_or(ModeSelect::Both).modes() {
        let config = search_config(&args.search, mode, 100_000);
        runs.extend(crate::search::sweep(&grid.points, &grid.rs, &config)?);
    }
    let violations = runs.iter().filter(|r| r.violation_derived).count();
    let csv = extremal_csv(&runs);
    let manifest = build_manifest(
        command_line.to_string(),
        Some(args.search.seed),
        Some(grid.label()),
        &runs,
        Some(&csv),
    );
    let json_path = PathBuf::from(format!("{}.json", args.out.display()));
    let csv_path = PathBuf::from(format!("{}.csv", args.out.display()));
    write_file(&json_path, &render_document(&manifest, &runs))?;
    write_file(&csv_path, &csv)?;
    println!("wrote {} and {}", json_path.display(), csv_path.display());
    println!("derived-bound violations: {violations} of {} runs", runs.len());
    Ok(violations > 0)
}

fn cmd_audit(args: AuditArgs, command_line: &str) -> Result<bool> {
    let grid = resolve_grid(&args.grid, GRID_DEFAULTS)?;
    let mut report = audit(&grid.points, &grid.rs)?;
    let mut violated = false;
    let samples = args.search.samples.unwrap_or(0);
    if samples > 0 {
        for mode in args.search.mode.unwrap_or(ModeSelect::Paper).modes() {
            let config = search_config(&args.search, mode, 0);
            let runs = crate::search::sweep(&grid.points, &grid.rs, &config)?;
            violated |= runs.iter().any(|r| r.violation_derived);
            apply_empirical(&mut report, &runs);
        }
    }
    let seed = (samples > 0).then_some(args.search.seed);
    let csv = args.out.as_ref().map(|_| audit_csv(&report));
    let manifest = build_manifest(
        command_line.to_string(),
        seed,
        Some(grid.label()),
        &report,
        csv.as_deref(),
    );
    match (&args.out, csv) {
        (Some(stem), Some(csv)) => {
            let json_path = PathBuf::from(format!("{}.json", stem.display()));
            let csv_path = PathBuf::from(format!("{}.csv", stem.display()));
            write_file(&json_path, &render_document(&manifest, &report))?;
            write_file(&csv_path, &csv)?;
            println!("wrote {} and {}", json_path.display(), csv_path.display());
        }
        _ => print!("{}", render_document(&manifest, &report)),
    }
    Ok(violated)
}
