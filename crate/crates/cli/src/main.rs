//! `matairy`: evaluate the matrix Airy function, sweep it over a grid,
//! calibrate the representation constants and run the check suites.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 on numerical failure
//! (with a JSON diagnostic on stderr) or when a check suite fails.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use matairy::matrix_airy::Representation;
use matairy::verification::Suite;

#[derive(Parser, Debug)]
#[command(name = "matairy", version, about = "Matrix Airy function evaluator and checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one representation at one argument
    Eval(EvalArgs),
    /// Evaluate one representation over a (xi, r) grid
    Sweep(SweepArgs),
    /// Fit the representation constants and save them
    Calibrate(CalibrateArgs),
    /// Run a check suite and write a JSON report
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// key=value quadrature overrides
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output file (default: stdout)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Random seed (only the check suites draw random numbers)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct Calibration {
    /// Calibration table, read if present
    #[arg(long, value_name = "FILE", default_value = "calibration.json")]
    calibration: PathBuf,

    /// Report bare integrals without applying the fitted constants
    #[arg(long)]
    uncalibrated: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Representation (direct, separated_eq5, n2_double_eq10, n2_single_eq12,
    /// n2_green_eq13, det_oracle; short forms without the suffix also work)
    #[arg(long, value_parser = parse_rep)]
    rep: Representation,

    /// Trace average xi = tr X / N
    #[arg(long, allow_negative_numbers = true, conflicts_with = "spectrum")]
    xi: Option<f64>,

    /// Eigenvalue separation of an N = 2 argument (eigenvalues xi ± r/2)
    #[arg(long, requires = "xi")]
    r: Option<f64>,

    /// Eigenvalues of X, comma separated
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    spectrum: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(flatten)]
    common: Common,

    #[command(flatten)]
    calibration: Calibration,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Representation (see `eval --help`)
    #[arg(long, value_parser = parse_rep)]
    rep: Representation,

    /// xi values: a single number or start:stop:count
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    xi: Option<String>,

    /// r values: a single number or start:stop:count; omit for N = 1
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    r: Option<String>,

    /// Both axes at once, XI[xR], e.g. -1:1:5x0.5:2:4
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(flatten)]
    common: Common,

    #[command(flatten)]
    calibration: Calibration,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Fit at these eigenvalues instead of the default points
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true, conflicts_with_all = ["xi", "r"])]
    spectrum: Option<String>,

    /// Fit at the N = 2 point (xi, r)
    #[arg(long, allow_negative_numbers = true, requires = "r")]
    xi: Option<f64>,

    #[arg(long, requires = "xi")]
    r: Option<f64>,

    /// Table to update (default: calibration.json)
    #[arg(long, value_name = "FILE")]
    calibration: Option<PathBuf>,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_parser = parse_suite, default_value = "all")]
    suite: Suite,

    /// Monte Carlo samples for the HCIZ (theorem2) suite
    #[arg(long, default_value_t = matairy::verification::DEFAULT_MC_SAMPLES)]
    samples: usize,

    /// Use this calibration table instead of fitting one
    #[arg(long, value_name = "FILE")]
    calibration: Option<PathBuf>,

    #[command(flatten)]
    common: Common,
}

fn parse_rep(s: &str) -> Result<Representation, String> {
    s.parse().map_err(|e: matairy::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: matairy::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Calibrate(a) => commands::calibrate(a),
        Command::Check(a) => commands::check(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}
