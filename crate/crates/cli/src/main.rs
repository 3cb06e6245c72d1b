//! polyflow: command-line driver for polygon-flow experiments.
//!
//! Subcommands: `evolve` (plain flow run with CSV/JSON/SVG output),
//! `heptagon` (the iterate-and-rescale-by-10 experiment), `quad`
//! (quadrilateral limit shapes under the rescaled flow), `triangle`
//! (Lyapunov run), `spectrum` (linearization sweep), `entropy` (entropy
//! functional and monotonicity residuals).
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 check
//! failure.

// `!(x > 0.0)` guards reject NaN; the clippy-suggested `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;

#[derive(Parser)]
#[command(name = "polyflow", version, about = "Polygon flow experiments")]
struct Cli {
    /// key=value config file; flags override file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the polygon flow and write trajectory CSV + summary JSON.
    Evolve(commands::evolve::EvolveArgs),
    /// Iterate-and-rescale heptagon experiment with per-iteration metrics.
    Heptagon(commands::heptagon::HeptagonArgs),
    /// Quadrilateral limit shapes under the rescaled flow.
    Quad(commands::quad::QuadArgs),
    /// Triangle Lyapunov run: angles, V and dV/dt per sample.
    Triangle(commands::triangle::TriangleArgs),
    /// Spectral classification sweep of the linearization.
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Entropy functional and monotonicity residuals along a run.
    Entropy(commands::entropy::EntropyArgs),
}

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<polyflow_core::Error> for CliError {
    fn from(e: polyflow_core::Error) -> Self {
        use polyflow_core::Error::*;
        match e {
            TooFewVertices(_) | InvalidArgument(_) | Parse(_) => CliError::usage(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version arrive here as non-error "errors".
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let cfg = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("polyflow: {}", e.message);
                return ExitCode::from(e.code);
            }
        },
        None => Config::default(),
    };

    let result = match cli.command {
        Command::Evolve(args) => commands::evolve::run(&args, &cfg),
        Command::Heptagon(args) => commands::heptagon::run(&args, &cfg),
        Command::Quad(args) => commands::quad::run(&args, &cfg),
        Command::Triangle(args) => commands::triangle::run(&args, &cfg),
        Command::Spectrum(args) => commands::spectrum::run(&args, &cfg),
        Command::Entropy(args) => commands::entropy::run(&args, &cfg),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polyflow: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
