//! `wfcrack`: parameter reports, tip coefficients, sweeps, perturbation ladders and
//! near-tip field grids for an interfacial crack, driven by a JSON config.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Library errors raised while building params or loads are input problems.
    pub fn config(e: wfcrack::Error) -> Self {
        CliError::Config(e.to_string())
    }

    /// Failures during evaluation; an unbalanced load is still the input's fault.
    pub fn numerical(e: wfcrack::Error) -> Self {
        match e {
            wfcrack::Error::Unbalanced { .. } | wfcrack::Error::InvalidMaterial(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }

    fn code(&self) -> (&'static str, u8) {
        match self {
            CliError::Config(_) => ("E_CONFIG", 2),
            CliError::Output(_) => ("E_OUTPUT", 2),
            CliError::Numerical(_) => ("E_NUMERICAL", 3),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wfcrack",
    version,
    about = "Weight functions and stress intensity factors for an interfacial crack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative quadrature tolerance, overriding `numerics.tol`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid size: sweep points per η, or angles for `field`.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Comma-separated η values for `sweep`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eta: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every derived material constant and identity residual.
    Params(Common),
    /// K, A, B from the closed forms and from weight-function quadrature.
    Sif(Common),
    /// Three-point loading over b/a for several η (CSV).
    Sweep(Common),
    /// Coefficient change under small crack advance against the first-order prediction (CSV).
    Perturb(Common),
    /// Near-tip stress and displacement on a polar grid (CSV).
    Field(Common),
    /// Antiplane K_III and A_III.
    Mode3(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Params(c) => commands::params(c),
        Command::Sif(c) => commands::sif(c),
        Command::Sweep(c) => commands::sweep(c),
        Command::Perturb(c) => commands::perturb(c),
        Command::Field(c) => commands::field(c),
        Command::Mode3(c) => commands::mode3(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (tag, status) = e.code();
            eprintln!("wfcrack: {tag}: {e}");
            ExitCode::from(status)
        }
    }
}
