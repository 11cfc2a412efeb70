//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 config/schema error,
//! 3 violated modelling assumption, 4 simulated distance above the bound.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::recurrence::{phi_closed, phi_direct, recurrence_residual};
use crate::bounds::{theorem1_bound, BoundParameters, BoundReport};
use crate::config::{config_hash, ConfigError, Experiment, ExperimentConfig};
use crate::error::Error;
use crate::measurement::{Protocol, Strength};
use crate::stabilizer;
use crate::sweep::{run_sweep, SweepReport};
use crate::verify::{self, Suite, VerifyOptions};

// Writes to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "zeno-bench",
    version,
    about = "Weak-measurement Zeno simulator and error-bound engine"
)]
pub struct Cli {
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate the configured protocol over the sweep grid and compare with the bound.
    Run(RunArgs),
    /// As `run`, for both the group and the generator protocol.
    Sweep(RunArgs),
    /// Evaluate the bound only, without simulation.
    Bound(BoundArgs),
    /// Compare the closed form of the weak-term sum with its direct triple sum.
    RecurrenceCheck(CheckArgs),
    /// Run the seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for report.json and sweep.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Slack when comparing simulated distances with the bound.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Take Q, J0, J1 and the grid from a config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "Q", alias = "q")]
    pub big_q: Option<u64>,
    #[arg(long = "J0", alias = "j0")]
    pub j0: Option<f64>,
    #[arg(long = "J1", alias = "j1")]
    pub j1: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long = "M", alias = "m")]
    pub cycles: Option<u64>,
    /// Measurement strength, a positive number or `inf`.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, value_parser = parse_protocol)]
    pub protocol: Option<Protocol>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// pauli, stabilizer, measurement, bounds or all.
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub zeta_perturbation: f64,
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    match s {
        "group" => Ok(Protocol::Group),
        "generators" => Ok(Protocol::Generators),
        other => Err(format!("unknown protocol {other:?} (expected group or generators)")),
    }
}

fn parse_strength(s: &str) -> Result<Strength, Error> {
    let eps = match s {
        "inf" | "infinity" => f64::INFINITY,
        other => other
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("invalid strength {other:?}")))?,
    };
    Strength::new(eps)
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Model(Error),
    BoundViolation(usize),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(Error::Assumption(_)) => 3,
            CliError::Model(_) | CliError::Failed(_) => 1,
            CliError::BoundViolation(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::BoundViolation(n) => write!(f, "{n} sweep rows exceed the bound"),
            CliError::Failed(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Failed(format!("{}: {e}", path.display()))
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("report serialises");
    s.push('\n');
    s.into_bytes()
}

struct Loaded {
    config: ExperimentConfig,
    experiment: Experiment,
    hash: String,
}

fn load(path: &Path, tolerance: Option<f64>) -> Result<Loaded, CliError> {
    let (config, text) = ExperimentConfig::load(path)?;
    let mut experiment = config.build()?;
    if let Some(t) = tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(ConfigError {
                path: "--tolerance".into(),
                message: "must be finite and nonnegative".into(),
            }
            .into());
        }
        experiment.tolerances.bound = t;
    }
    Ok(Loaded {
        config,
        experiment,
        hash: config_hash(&text),
    })
}

fn out_dir(explicit: &Option<PathBuf>, config: Option<&ExperimentConfig>) -> PathBuf {
    explicit
        .clone()
        .or_else(|| config.and_then(|c| c.output.dir.clone()))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_sweep(report: &SweepReport, dir: &Path) -> Result<(), CliError> {
    let mut csv = Vec::new();
    report
        .write_csv(&mut csv)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    write_file(dir, "sweep.csv", &csv)?;
    write_file(dir, "report.json", &to_json(report))?;
    Ok(())
}

fn cmd_run(args: &RunArgs, protocols: Option<&[Protocol]>) -> Result<(), CliError> {
    let loaded = load(&args.config, args.tolerance)?;
    let own = [loaded.experiment.protocol];
    let protocols = protocols.unwrap_or(&own);
    let report = run_sweep(&loaded.experiment, protocols, loaded.hash.clone())?;
    let dir = out_dir(&args.out, Some(&loaded.config));
    write_sweep(&report, &dir)?;
    let s = &report.summary;
    say!(
        "{} rows, {} violations, max D_sim {:.6e}, max D_sim/D_bound {:.6}",
        s.rows,
        s.violations,
        s.max_d_sim,
        s.max_ratio
    );
    say!("wrote {}", dir.display());
    if s.violations > 0 {
        return Err(CliError::BoundViolation(s.violations));
    }
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    let missing = |name: &str| {
        CliError::Config(ConfigError {
            path: format!("--{name}"),
            message: "required without --config".into(),
        })
    };
    let strength_arg = args.epsilon.as_deref().map(parse_strength).transpose().map_err(|e| {
        CliError::Config(ConfigError {
            path: "--epsilon".into(),
            message: e.to_string(),
        })
    })?;
    let reports: Vec<BoundReport> = if let Some(path) = &args.config {
        let loaded = load(path, None)?;
        let exp = &loaded.experiment;
        let protocol = args.protocol.unwrap_or(exp.protocol);
        let taus = args.tau.map(|t| vec![t]).unwrap_or_else(|| exp.taus.clone());
        let cycles = args.cycles.map(|m| vec![m]).unwrap_or_else(|| exp.cycles.clone());
        let strengths = strength_arg.map(|s| vec![s]).unwrap_or_else(|| exp.strengths.clone());
        let mut out = Vec::new();
        for &tau in &taus {
            let dec = stabilizer::decompose_over(&exp.code, &exp.hamiltonian, 0.0, tau, exp.tolerances.validation)?;
            for &m in &cycles {
                for &eps in &strengths {
                    let p = BoundParameters::new(exp.code.big_q(), protocol, dec.j0, dec.j1, tau, m, eps)?;
                    out.push(theorem1_bound(&p)?);
                }
            }
        }
        out
    } else {
        let p = BoundParameters::new(
            args.big_q.ok_or_else(|| missing("Q"))?,
            args.protocol.unwrap_or(Protocol::Group),
            args.j0.ok_or_else(|| missing("J0"))?,
            args.j1.ok_or_else(|| missing("J1"))?,
            args.tau.ok_or_else(|| missing("tau"))?,
            args.cycles.ok_or_else(|| missing("M"))?,
            strength_arg.ok_or_else(|| missing("epsilon"))?,
        )?;
        vec![theorem1_bound(&p)?]
    };
    for r in &reports {
        say!(
            "{} Q={} tau={} M={} epsilon={} B={:.10e} strong={:.10e}",
            r.protocol.name(),
            r.big_q,
            r.tau,
            r.cycles,
            r.epsilon,
            r.full_bound,
            r.strong_limit
        );
    }
    if let Some(dir) = &args.out {
        write_file(dir, "report.json", &to_json(&reports))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RecurrencePoint {
    #[serde(rename = "Q")]
    big_q: f64,
    beta: f64,
    xi: f64,
    #[serde(rename = "M")]
    cycles: u64,
    phi_direct: f64,
    phi_closed: f64,
    relative_error: f64,
    recurrence_residual: Option<f64>,
}

#[derive(Serialize)]
struct RecurrenceReport {
    tolerance: f64,
    points: Vec<RecurrencePoint>,
    max_relative_error: f64,
    max_recurrence_residual: f64,
    passed: bool,
}

fn cmd_recurrence(args: &CheckArgs) -> Result<(), CliError> {
    let mut points = Vec::new();
    for (q, beta, xi, m) in verify::phi_grid() {
        let direct = phi_direct(q, beta, xi, m)?;
        let closed = phi_closed(q, beta, xi, m)?.value;
        let residual = if m >= 2 {
            Some(recurrence_residual(q, beta, xi, m, |k| phi_direct(q, beta, xi, k))?)
        } else {
            None
        };
        points.push(RecurrencePoint {
            big_q: q,
            beta,
            xi,
            cycles: m,
            phi_direct: direct,
            phi_closed: closed,
            relative_error: (closed - direct).abs() / direct.abs(),
            recurrence_residual: residual,
        });
    }
    let max_rel = points.iter().map(|p| p.relative_error).fold(0.0, f64::max);
    let max_res = points.iter().filter_map(|p| p.recurrence_residual).fold(0.0, f64::max);
    let passed = max_rel < args.tolerance && max_res < args.tolerance;
    say!(
        "{} points, max relative error {max_rel:.3e}, max recurrence residual {max_res:.3e}: {}",
        points.len(),
        if passed { "PASS" } else { "FAIL" }
    );
    let report = RecurrenceReport {
        tolerance: args.tolerance,
        points,
        max_relative_error: max_rel,
        max_recurrence_residual: max_res,
        passed,
    };
    if let Some(dir) = &args.out {
        write_file(dir, "report.json", &to_json(&report))?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("closed form disagrees with the direct sum".into()))
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let opts = VerifyOptions {
        seed: args.seed,
        samples: args.samples,
        zeta_perturbation: args.zeta_perturbation,
    };
    let report = verify::run(args.suite, &opts)?;
    say!("{report}");
    if let Some(dir) = &args.out {
        write_file(dir, "report.json", &to_json(&report))?;
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<String> = report
            .failures()
            .map(|o| format!("{}/{}", o.suite, o.property))
            .collect();
        Err(CliError::Failed(format!("failed properties: {}", names.join(", "))))
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, None),
        Command::Sweep(a) => cmd_run(a, Some(&[Protocol::Group, Protocol::Generators])),
        Command::Bound(a) => cmd_bound(a),
        Command::RecurrenceCheck(a) => cmd_recurrence(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("ZENO_BENCH_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn main() -> ExitCode {
    main_from(std::env::args_os())
}
