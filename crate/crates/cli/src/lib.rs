//! The `midas` command line: corpus validation, indicator reports,
//! threshold sweeps, matched comparisons and synthetic corpora.

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{RunConfig, Settings};
pub use crate::error::CliError;

pub const THREADS_ENV: &str = "MIDAS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "midas", version, about = "Citation indicators and award-cohort analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a corpus file.
    Validate(Common),
    /// Per-researcher indicator reports for the eligible cohort.
    Compute(Common),
    /// Mean AMT over an (x, y) grid, plane fit and normality check.
    Sweep(SweepArgs),
    /// Match award winners to controls and compare indicators.
    Compare(CompareArgs),
    /// Write a synthetic corpus.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Corpus file (JSONL or CSV).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Corpus format; inferred from the extension when omitted.
    #[arg(long, value_parser = ["jsonl", "csv"])]
    format: Option<String>,
    /// Flat key = value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluation year (defaults to the corpus reference year).
    #[arg(long = "as-of")]
    as_of: Option<i32>,
    /// AMT time threshold in years.
    #[arg(long)]
    x: Option<u32>,
    /// AMT citation threshold.
    #[arg(long)]
    y: Option<u32>,
    /// Last observed calendar year of the corpus.
    #[arg(long)]
    reference_year: Option<i32>,
    #[arg(long)]
    min_articles: Option<usize>,
    #[arg(long)]
    min_core_fraction: Option<f64>,
    #[arg(long)]
    min_span: Option<i32>,
    /// Keep every researcher instead of applying the eligibility rule.
    #[arg(long)]
    no_filter: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Time thresholds, e.g. `1..6` or `1,2,4`.
    #[arg(long)]
    grid_x: Option<String>,
    /// Citation thresholds, e.g. `5..40:5`.
    #[arg(long)]
    grid_y: Option<String>,
    /// Largest sample given to Shapiro-Wilk before subsampling.
    #[arg(long)]
    max_n: Option<usize>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// File with one treated researcher id per line.
    #[arg(long)]
    treated: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    researchers: Option<usize>,
    #[arg(long)]
    awardees: Option<usize>,
}

fn settings(c: &Common) -> Result<Settings, CliError> {
    let mut s = match &c.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    s.set_opt("corpus", c.corpus.as_ref().map(|p| p.display()));
    s.set_opt("format", c.format.as_ref());
    s.set_opt("out", c.out.as_ref().map(|p| p.display()));
    s.set_opt("seed", c.seed);
    s.set_opt("as_of", c.as_of);
    s.set_opt("x", c.x);
    s.set_opt("y", c.y);
    s.set_opt("reference_year", c.reference_year);
    s.set_opt("min_articles", c.min_articles);
    s.set_opt("min_core_fraction", c.min_core_fraction);
    s.set_opt("min_span", c.min_span);
    if c.no_filter {
        s.set("no_filter", true);
    }
    Ok(s)
}

type Handler = fn(&RunConfig) -> Result<String, CliError>;

fn plan(command: Command) -> Result<(Handler, RunConfig), CliError> {
    let (handler, s): (Handler, Settings) = match command {
        Command::Validate(c) => (commands::validate, settings(&c)?),
        Command::Compute(c) => (commands::compute, settings(&c)?),
        Command::Sweep(a) => {
            let mut s = settings(&a.common)?;
            s.set_opt("grid_x", a.grid_x);
            s.set_opt("grid_y", a.grid_y);
            s.set_opt("max_n", a.max_n);
            (commands::sweep, s)
        }
        Command::Compare(a) => {
            let mut s = settings(&a.common)?;
            s.set_opt("treated", a.treated.as_ref().map(|p| p.display()));
            (commands::compare, s)
        }
        Command::Simulate(a) => {
            let mut s = settings(&a.common)?;
            s.set_opt("researchers", a.researchers);
            s.set_opt("awardees", a.awardees);
            (commands::simulate, s)
        }
    };
    Ok((handler, RunConfig::resolve(&s)?))
}

/// Worker count from `MIDAS_THREADS`; unset or 0 means one per core.
pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))),
    }
}

fn execute(command: Command) -> Result<String, CliError> {
    let (handler, cfg) = plan(command)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads_from_env()?)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| handler(&cfg))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
