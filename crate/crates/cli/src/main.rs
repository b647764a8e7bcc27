//! `berlab` command-line interface.
//!
//! Machine-readable JSON goes to standard output, a short human summary to
//! standard error. Exit codes: 0 success, 1 verification failure, 2
//! usage/config error, 3 data error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use berlab::harness::known_checker;
use berlab::io::{
    parse_space_descriptor, FiniteSpaceFile, MatrixFile, SpaceDescriptor, SuiteConfigFile,
};
use berlab::{
    basis_projection, berezin_number, berezin_set_sample, berezin_symbol, numerical_radius,
    run_suite, tightness_search, CheckMode, ComplexMatrix, DomainPoint, Error, InstanceFamily,
    SearchConfig, SpaceModel, SuiteResult,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(
    name = "berlab",
    version,
    about = "Berezin numbers, numerical radii, and operator-matrix inequality verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Berezin number of an operator over a space (lower estimate).
    Ber(BerArgs),
    /// Numerical radius of an operator.
    W(WArgs),
    /// Berezin symbol of an operator at one domain point.
    Symbol(SymbolArgs),
    /// The rank-one projection example on a truncated Hardy space.
    Karaev(KaraevArgs),
    /// Run the inequality checker suite and write report files.
    Verify(VerifyArgs),
    /// Search a checker's instance family for its tightest case.
    Sweep(SweepArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("operator").required(true).multiple(false)))]
struct BerArgs {
    /// Space descriptor: `hardy:N`, `bergman:N`, or `finite:<path>`.
    #[arg(long, requires = "op")]
    space: Option<String>,
    /// Operator matrix JSON file (needs --space).
    #[arg(long, group = "operator", requires = "space")]
    op: Option<PathBuf>,
    /// Block-operator JSON file; spaces come from the file itself.
    #[arg(long, group = "operator")]
    block_op: Option<PathBuf>,
    /// Radial,angular grid counts.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Golden-section refinement iterations.
    #[arg(long)]
    refine: Option<usize>,
}

#[derive(Args)]
struct WArgs {
    /// Operator matrix JSON file.
    #[arg(long)]
    op: PathBuf,
    /// Number of sweep angles.
    #[arg(long, default_value_t = 360)]
    sweep: usize,
    /// Golden-section refinement iterations.
    #[arg(long, default_value_t = 40)]
    refine: usize,
}

#[derive(Args)]
struct SymbolArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    op: PathBuf,
    /// Domain point: "re,im" for disk models, a point index for finite
    /// models; components of a tuple separated by ';'.
    #[arg(long)]
    at: String,
}

#[derive(Args)]
struct KaraevArgs {
    /// Truncation dimension (at least 2).
    #[arg(long)]
    dim: usize,
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long)]
    refine: Option<usize>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).multiple(false)))]
struct VerifyArgs {
    /// Suite configuration JSON file.
    #[arg(long, group = "source")]
    suite: Option<PathBuf>,
    /// Run the full checker catalog.
    #[arg(long, group = "source")]
    all: bool,
    /// Instances per checker (with --all).
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Base seed (with --all).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Check mode: certified or tight (with --all).
    #[arg(long, default_value = "certified")]
    mode: String,
    /// Output directory for report files.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    checker: String,
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance family: random or equality.
    #[arg(long, default_value = "random")]
    family: String,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, a) = s.split_once(',').ok_or("expected RADIAL,ANGULAR")?;
    Ok((
        r.trim().parse().map_err(|_| "bad radial count")?,
        a.trim().parse().map_err(|_| "bad angular count")?,
    ))
}

/// A failure that already knows its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

/// Input-handling errors: dimension mismatches are data errors, everything
/// else is a usage/config error.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DimMismatch { .. } => Failure::data(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match cli.command {
        Command::Ber(args) => cmd_ber(args),
        Command::W(args) => cmd_w(args),
        Command::Symbol(args) => cmd_symbol(args),
        Command::Karaev(args) => cmd_karaev(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// BERLAB_THREADS caps the worker count; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(v) = std::env::var("BERLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

// --- output helpers -------------------------------------------------------

/// JSON formatter printing every float with 17 significant digits.
struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // match serde_json's own treatment of non-finite floats
            write!(writer, "null")
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci17);
    value
        .serialize(&mut ser)
        .expect("serialization cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

fn emit(value: &impl Serialize) {
    println!("{}", to_json(value));
}

// --- input helpers ---------------------------------------------------------

fn load_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("malformed matrix file {}: {e}", path.display())))?;
    Ok(file.to_matrix()?)
}

fn resolve_space(descriptor: &str) -> Result<SpaceModel, Failure> {
    match parse_space_descriptor(descriptor)? {
        SpaceDescriptor::Hardy(n) => Ok(SpaceModel::hardy(n)?),
        SpaceDescriptor::Bergman(n) => Ok(SpaceModel::bergman(n)?),
        SpaceDescriptor::FinitePath(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
            let file: FiniteSpaceFile = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("malformed feature table {path}: {e}")))?;
            Ok(file.to_space()?)
        }
    }
}

fn search_config(grid: Option<(usize, usize)>, refine: Option<usize>) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some((radial, angular)) = grid {
        cfg.radial = radial.max(1);
        cfg.angular = angular.max(1);
    }
    if let Some(r) = refine {
        cfg.refine = r;
    }
    cfg
}

fn parse_point(token: &str, space: &SpaceModel) -> Result<DomainPoint, Failure> {
    let token = token.trim();
    match space {
        SpaceModel::FiniteSet { labels, .. } => {
            if let Ok(index) = token.parse::<usize>() {
                return Ok(DomainPoint::index(index));
            }
            labels
                .iter()
                .position(|l| l == token)
                .map(DomainPoint::index)
                .ok_or_else(|| Failure::usage(format!("unknown point `{token}`")))
        }
        _ => {
            let (re, im) = token
                .split_once(',')
                .ok_or_else(|| Failure::usage(format!("expected `re,im`, got `{token}`")))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| Failure::usage("bad real part"))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| Failure::usage("bad imaginary part"))?;
            Ok(DomainPoint::Disk { re, im })
        }
    }
}

// --- commands ---------------------------------------------------------------

fn cmd_ber(args: BerArgs) -> Result<u8, Failure> {
    let cfg = search_config(args.grid, args.refine);
    let (est, source, space_label) = if let Some(path) = &args.block_op {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let file: berlab::io::BlockFile = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("malformed block file: {e}")))?;
        let block = file.to_block_operator(|d| {
            resolve_space(d).map_err(|f| berlab::Error::BadSpec(f.message))
        })?;
        let label = block.spaces().descriptor();
        let est = berezin_number(block.flat(), block.spaces(), &cfg)?;
        (est, path.display().to_string(), label)
    } else {
        let descriptor = args.space.expect("clap enforces --space with --op");
        let path = args.op.expect("clap enforces the operator group");
        let space = resolve_space(&descriptor)?;
        let op = load_matrix(&path)?;
        let est = berezin_number(&op, &space, &cfg)?;
        (est, path.display().to_string(), descriptor)
    };
    emit(&json!({
        "ber": est.value,
        "argmax": est.argmax,
        "mode": est.mode,
        "space": space_label,
        "seed": est.seed,
    }));
    eprintln!("ber({source}) >= {:.6} over {space_label}", est.value);
    Ok(0)
}

fn cmd_w(args: WArgs) -> Result<u8, Failure> {
    let op = load_matrix(&args.op)?;
    let est = numerical_radius(&op, args.sweep, args.refine)?;
    emit(&json!({ "w": est.value, "theta": est.theta }));
    eprintln!("w({}) = {:.6}", args.op.display(), est.value);
    Ok(0)
}

fn cmd_symbol(args: SymbolArgs) -> Result<u8, Failure> {
    let space = resolve_space(&args.space)?;
    let op = load_matrix(&args.op)?;
    let value = if args.at.contains(';') {
        return Err(Failure::usage(
            "tuple points need a direct-sum space; pass a single-component point",
        ));
    } else {
        let point = parse_point(&args.at, &space)?;
        berezin_symbol(&op, &space, &[point])?
    };
    emit(
        &json!({ "symbol": { "re": value.re, "im": value.im }, "space": args.space, "at": args.at }),
    );
    eprintln!("symbol at {} = {:.6} + {:.6}i", args.at, value.re, value.im);
    Ok(0)
}

fn cmd_karaev(args: KaraevArgs) -> Result<u8, Failure> {
    if args.dim < 2 {
        return Err(Failure::usage("the projection target needs dim >= 2"));
    }
    let space = SpaceModel::hardy(args.dim)?;
    let op = basis_projection(args.dim, 1);
    let cfg = search_config(args.grid, args.refine);
    let est = berezin_number(&op, &space, &cfg)?;
    let w = numerical_radius(&op, 360, 40)?;
    let norm = op.operator_norm();
    let samples = berezin_set_sample(&op, &space, 512)?;
    let set_min = samples.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let set_max = samples
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_imag = samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    emit(&json!({
        "dim": args.dim,
        "ber": est.value,
        "argmax": est.argmax,
        "w": w.value,
        "norm": norm,
        "set_range": { "min": set_min, "max": set_max },
        "set_max_imag": max_imag,
    }));
    eprintln!(
        "dim {}: ber >= {:.6}, w = {:.6}, norm = {:.6}, symbol range [{:.6}, {:.6}]",
        args.dim, est.value, w.value, norm, set_min, set_max
    );
    Ok(0)
}

fn verify_config(args: &VerifyArgs) -> Result<(Vec<String>, usize, u64, CheckMode), Failure> {
    if let Some(path) = &args.suite {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let file: SuiteConfigFile = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("malformed suite config: {e}")))?;
        let mode = CheckMode::parse(&file.mode)
            .ok_or_else(|| Failure::usage(format!("unknown mode `{}`", file.mode)))?;
        Ok((file.checkers, file.n, file.seed, mode))
    } else {
        let mode = CheckMode::parse(&args.mode)
            .ok_or_else(|| Failure::usage(format!("unknown mode `{}`", args.mode)))?;
        let checkers = berlab::CATALOG.iter().map(|s| s.to_string()).collect();
        Ok((checkers, args.n, args.seed, mode))
    }
}

fn write_reports(out: &Path, result: &SuiteResult) -> Result<(), Failure> {
    fs::create_dir_all(out)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", out.display())))?;
    let json_path = out.join("reports.json");
    fs::write(&json_path, to_json(result))
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", json_path.display())))?;

    // One JSON object per report, one per line.
    let jsonl_path = out.join("reports.jsonl");
    let mut jsonl = String::new();
    for checker in &result.results {
        for report in &checker.reports {
            jsonl.push_str(&to_json(report));
            jsonl.push('\n');
        }
    }
    fs::write(&jsonl_path, jsonl)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", jsonl_path.display())))?;

    let csv_path = out.join("summary.csv");
    let mut csv = String::from("checker,seed,lhs,rhs,slack,pass,mode\n");
    for checker in &result.results {
        for report in &checker.reports {
            let seed = report.provenance.seed.unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{},{}\n",
                report.checker,
                seed,
                report.lhs,
                report.rhs,
                report.slack,
                report.pass,
                report.mode
            ));
        }
    }
    fs::write(&csv_path, csv)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", csv_path.display())))?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let (checkers, n, seed, mode) = verify_config(&args)?;
    for id in &checkers {
        if !known_checker(id) {
            return Err(Failure::usage(format!("unknown checker `{id}`")));
        }
    }
    let result = run_suite(&checkers, n, seed, mode)?;
    write_reports(&args.out, &result)?;
    let worst: serde_json::Map<String, serde_json::Value> = result
        .results
        .iter()
        .filter_map(|r| {
            r.worst_slack
                .map(|s| (r.checker.clone(), serde_json::Value::from(s)))
        })
        .collect();
    emit(&json!({
        "checkers": checkers,
        "n_per_checker": n,
        "seed": seed,
        "mode": mode,
        "instances": result.total_pass + result.total_fail,
        "failures": result.total_fail,
        "worst_slack": worst,
        "out": args.out,
    }));
    for r in &result.results {
        let worst = r
            .worst_slack
            .map_or("n/a".to_string(), |s| format!("{s:.3e}"));
        eprintln!(
            "{:>16}: {}/{} pass, worst slack {}",
            r.checker,
            r.pass_count,
            r.pass_count + r.fail_count,
            worst
        );
    }
    let _ = std::io::stderr().flush();
    Ok(if result.total_fail > 0 {
        EXIT_FAILURE
    } else {
        0
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, Failure> {
    if args.budget == 0 {
        return Err(Failure::usage("budget must be at least 1"));
    }
    if !known_checker(&args.checker) {
        return Err(Failure::usage(format!(
            "unknown checker `{}`",
            args.checker
        )));
    }
    let family = match args.family.as_str() {
        "random" => InstanceFamily::Random,
        "equality" => InstanceFamily::Equality,
        other => return Err(Failure::usage(format!("unknown family `{other}`"))),
    };
    let outcome = tightness_search(&args.checker, args.budget, args.seed, family)?;
    emit(&outcome);
    eprintln!(
        "{}: best lhs/rhs ratio {:.9} over {} instances{}",
        outcome.checker,
        outcome.ratio,
        outcome.budget,
        if outcome.violation {
            " (VIOLATION)"
        } else {
            ""
        }
    );
    Ok(if outcome.violation { EXIT_FAILURE } else { 0 })
}
