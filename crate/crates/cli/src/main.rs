//! `ctrw`: price perpetual options, emit survival curves and convergence
//! tables, and run the simulation cross-checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

mod commands;
mod config;
mod csv;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Settings;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ctrw", version, about = "Perpetual American options under a CTRW market model")]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Price one contract and report its exercise boundary.
    Price(PriceArgs),
    /// Inverted one-sided survival curve next to simulated frequencies.
    Survival(SurvivalArgs),
    /// Put prices against the Black-Scholes limit for a list of jump rates.
    Fig2(Fig2Args),
    /// Simulation-versus-closed-form verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Decay rate of upward jumps.
    #[arg(long)]
    rho: Option<f64>,
    /// Decay rate of downward jumps.
    #[arg(long)]
    gamma: Option<f64>,
    /// Risk-free rate.
    #[arg(long)]
    r: Option<f64>,
    /// Transaction rate, or `auto` for the martingale rate. A number makes
    /// the model non-risk-neutral.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Significant digits in CSV output.
    #[arg(long)]
    precision: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Number of simulated paths.
    #[arg(long = "paths", alias = "n-paths")]
    paths: Option<u64>,
}

#[derive(Debug, Args)]
struct ContractArgs {
    #[arg(long, conflicts_with_all = ["call", "binary_call", "binary_put"])]
    put: bool,
    #[arg(long, conflicts_with_all = ["binary_call", "binary_put"])]
    call: bool,
    #[arg(long, conflicts_with = "binary_put")]
    binary_call: bool,
    #[arg(long)]
    binary_put: bool,
    /// Strike, or the threshold of a binary contract.
    #[arg(long)]
    strike: Option<f64>,
}

#[derive(Debug, Args)]
struct PriceArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    contract: ContractArgs,
    #[arg(long)]
    spot: Option<f64>,
    /// Print a CSV row instead of text.
    #[arg(long)]
    csv: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SurvivalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    spot: Option<f64>,
    /// Barrier price level.
    #[arg(long)]
    barrier: Option<f64>,
    /// `up` or `down`.
    #[arg(long)]
    side: Option<String>,
    /// Comma-separated times or `start:stop:step`.
    #[arg(long)]
    times: Option<String>,
    #[command(flatten)]
    sim: SimArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct Fig2Args {
    #[arg(long)]
    r: Option<f64>,
    /// Black-Scholes volatility; sets `gamma = rho - 1 + 2r/sigma^2`.
    #[arg(long)]
    sigma: Option<f64>,
    /// Comma-separated jump rates.
    #[arg(long)]
    rhos: Option<String>,
    /// Spot-to-strike grid, comma-separated or `start:stop:step`.
    #[arg(long)]
    moneyness: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    sim: SimArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn put<T: ToString>(settings: &mut Settings, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        settings.set(key, v.to_string());
    }
}

impl ModelArgs {
    fn apply(&self, s: &mut Settings) {
        put(s, "rho", &self.rho);
        put(s, "gamma", &self.gamma);
        put(s, "r", &self.r);
        put(s, "lambda", &self.lambda);
    }
}

impl OutputArgs {
    fn apply(&self, s: &mut Settings) {
        put(s, "precision", &self.precision);
        put(s, "output", &self.output.as_ref().map(|p| p.display().to_string()));
    }
}

impl SimArgs {
    fn apply(&self, s: &mut Settings) {
        put(s, "seed", &self.seed);
        put(s, "paths", &self.paths);
    }
}

impl ContractArgs {
    fn apply(&self, s: &mut Settings) {
        let option = [(self.put, "put"), (self.call, "call"), (self.binary_call, "binary-call"), (self.binary_put, "binary-put")]
            .into_iter()
            .find_map(|(on, name)| on.then_some(name));
        put(s, "option", &option);
        put(s, "strike", &self.strike);
    }
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let mut s = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    match &cli.command {
        Command::Price(a) => {
            a.model.apply(&mut s);
            a.contract.apply(&mut s);
            put(&mut s, "spot", &a.spot);
            if a.csv {
                s.set("csv", "true");
            }
            a.output.apply(&mut s);
        }
        Command::Survival(a) => {
            a.model.apply(&mut s);
            put(&mut s, "spot", &a.spot);
            put(&mut s, "barrier", &a.barrier);
            put(&mut s, "side", &a.side);
            put(&mut s, "times", &a.times);
            a.sim.apply(&mut s);
            a.output.apply(&mut s);
        }
        Command::Fig2(a) => {
            put(&mut s, "r", &a.r);
            put(&mut s, "sigma", &a.sigma);
            put(&mut s, "rhos", &a.rhos);
            put(&mut s, "moneyness", &a.moneyness);
            a.output.apply(&mut s);
        }
        Command::Verify(a) => {
            a.model.apply(&mut s);
            a.sim.apply(&mut s);
            a.output.apply(&mut s);
        }
    }
    Ok(s)
}

/// Caps the worker pool at `CTRW_THREADS`. Results do not depend on it.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CTRW_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("CTRW_THREADS: expected a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("CTRW_THREADS: {e}")))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let s = settings(cli)?;
    match cli.command {
        Command::Price(_) => commands::price_cmd(&s),
        Command::Survival(_) => commands::survival_cmd(&s),
        Command::Fig2(_) => commands::fig2_cmd(&s),
        Command::Verify(_) => commands::verify_cmd(&s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
