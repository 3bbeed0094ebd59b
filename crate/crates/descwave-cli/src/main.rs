//! Batch front end: validate, solve, and sweep problem specs.
//!
//! Exit codes: 0 pass, 1 hypothesis/residual failure, 2 input error,
//! 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use descwave_cli::runner::{cmd_check, cmd_example, cmd_solve, cmd_sweep, load_input, Failure};
use descwave_cli::Outcome;

/// Environment variable overriding the default residual tolerance.
const TOL_ENV: &str = "DESCWAVE_TOL";

#[derive(Parser)]
#[command(
    name = "descwave",
    version,
    about = "Discrete solutions of singular strongly coupled hyperbolic systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Problem spec file (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Built-in example name instead of a spec file.
    #[arg(long)]
    example: Option<String>,
    /// Output directory for reports and grids.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Residual tolerance override (also via DESCWAVE_TOL).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every solvability hypothesis; write report.json.
    Check {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Validate, assemble the solution, write solution.csv and report.json.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Assemble even when the hypothesis check fails.
        #[arg(long)]
        force: bool,
    },
    /// Run the time-step halving sweep; write sweep.csv, sweep_plot.gp,
    /// report.json.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Number of halvings (default from the spec options).
        #[arg(long)]
        halvings: Option<usize>,
    },
    /// Write a built-in example spec to `<name>.json`.
    Example {
        /// Example name (paper-4-2, scalar-stable, nonsingular).
        #[arg(long)]
        example: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn resolve_tol(flag: Option<f64>) -> Result<Option<f64>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(TOL_ENV) {
        Ok(s) => s.parse::<f64>().map(Some).map_err(|_| Failure {
            outcome: Outcome::InputError,
            message: format!("cannot parse {TOL_ENV}={s} as a number"),
        }),
        Err(_) => Ok(None),
    }
}

fn run() -> Result<Outcome, Failure> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { input } => {
            let tol = resolve_tol(input.tol)?;
            let loaded = load_input(input.spec.as_deref(), input.example.as_deref())?;
            let outcome = cmd_check(&loaded, &input.out, tol)?;
            println!(
                "check {}: {}",
                loaded.label,
                if outcome == Outcome::Pass {
                    "pass"
                } else {
                    "fail"
                }
            );
            Ok(outcome)
        }
        Command::Solve { input, force } => {
            let tol = resolve_tol(input.tol)?;
            let loaded = load_input(input.spec.as_deref(), input.example.as_deref())?;
            let outcome = cmd_solve(&loaded, &input.out, tol, force)?;
            println!(
                "solve {}: {}",
                loaded.label,
                if outcome == Outcome::Pass {
                    "pass"
                } else {
                    "fail"
                }
            );
            Ok(outcome)
        }
        Command::Sweep { input, halvings } => {
            let tol = resolve_tol(input.tol)?;
            let loaded = load_input(input.spec.as_deref(), input.example.as_deref())?;
            let outcome = cmd_sweep(&loaded, &input.out, tol, halvings)?;
            println!(
                "sweep {}: {}",
                loaded.label,
                if outcome == Outcome::Pass {
                    "bounded"
                } else {
                    "not bounded"
                }
            );
            Ok(outcome)
        }
        Command::Example { example, out } => {
            let path = cmd_example(&example, &out)?;
            println!("wrote {}", path.display());
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.outcome.code() as u8)
        }
    }
}
