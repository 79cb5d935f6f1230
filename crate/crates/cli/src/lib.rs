//! Command-line driver: `analyze` observed data, `simulate` coverage
//! experiments and `report` plot-ready tables from a results bundle.

pub mod analyze;
pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod simulate;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{Command, Settings};
use error::{CliError, CliResult};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "WIMP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wimp",
    version,
    about = "Impulse-response intervals under cointegration-rank uncertainty"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Per-rank, WIMP and other intervals for a CSV data set.
    Analyze(AnalyzeArgs),
    /// Monte Carlo coverage experiment on a benchmark process.
    Simulate(SimulateArgs),
    /// Flat tables from an analyze or simulate bundle.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Flat key=value file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub p: Option<usize>,
    /// Miscoverage level, or `fiscal` for 68% bands.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Bootstrap replications.
    #[arg(long = "B")]
    pub replications: Option<usize>,
    /// Comma-separated method names.
    #[arg(long)]
    pub methods: Option<String>,
    /// none, constant or constant_and_trend.
    #[arg(long)]
    pub detrend: Option<String>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "h-max")]
    pub h_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// reduced or structural (Cholesky).
    #[arg(long)]
    pub irf: Option<String>,
    /// Level of the sequential trace test used by the `trace` method.
    #[arg(long = "trace-level")]
    pub trace_level: Option<f64>,
    /// minimal or drop_one effective-sample convention.
    #[arg(long)]
    pub convention: Option<String>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// dgp1 or dgp2.
    #[arg(long)]
    pub dgp: Option<String>,
    #[arg(long = "T")]
    pub t: Option<usize>,
    #[arg(long = "n-mc")]
    pub n_mc: Option<usize>,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn settings(command: Command, shared: &Shared) -> CliResult<Settings> {
    let mut s = Settings::new(command);
    if let Some(path) = &shared.config {
        s.merge_file(path)?;
    }
    s.set_opt("p", shared.p)?;
    s.set_opt("gamma", shared.gamma.as_ref())?;
    s.set_opt("replications", shared.replications)?;
    s.set_opt("methods", shared.methods.as_ref())?;
    s.set_opt("detrend", shared.detrend.as_ref())?;
    s.set_opt("c1", shared.c1)?;
    s.set_opt("c2", shared.c2)?;
    s.set_opt("seed", shared.seed)?;
    s.set_opt("h_max", shared.h_max)?;
    Ok(s)
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Cmd::Analyze(a) => {
            let mut s = settings(Command::Analyze, &a.shared)?;
            s.set_opt("input", a.input.as_ref().map(|p| p.display()))?;
            s.set_opt("irf", a.irf.as_ref())?;
            s.set_opt("trace_level", a.trace_level)?;
            s.set_opt("convention", a.convention.as_ref())?;
            analyze::analyze(&s, &a.shared.out).map(|_| ())
        }
        Cmd::Simulate(a) => {
            let mut s = settings(Command::Simulate, &a.shared)?;
            s.set_opt("dgp", a.dgp.as_ref())?;
            s.set_opt("t", a.t)?;
            s.set_opt("n_mc", a.n_mc)?;
            simulate::simulate(&s, &a.shared.out).map(|_| ())
        }
        Cmd::Report(a) => report::report(&a.bundle, &a.out).map(|_| ()),
    }
}
