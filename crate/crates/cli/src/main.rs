//! quadsym: verify the hidden-symmetry operator algebra of two exactly
//! solvable models, tabulate their spectra against the algebraic module
//! energies, and cross-check everything on independent numeric grids.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::CliError;

#[derive(Parser)]
#[command(
    name = "quadsym",
    version,
    about = "Exact symmetry-algebra verification, module spectra and numeric cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the operator identities symbolically (exact, parameter-free)
    Verify(CommonArgs),
    /// Tabulate physical levels against matched algebraic modules
    Spectrum(CommonArgs),
    /// Cross-check spectra on independent finite-difference grids
    Oracle(CommonArgs),
    /// Enumerate admissible modules by dimension
    Scan(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Inverse-distance center with two angular barriers
    Kc,
    /// Split harmonic oscillator with two radial barriers
    Dso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    /// Model family
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Ambient dimension N
    #[arg(long)]
    dim: Option<u32>,
    /// First-block dimension of the oscillator split
    #[arg(long)]
    split: Option<u32>,
    /// Center strength (decimal, fraction like 3/2, or "symbolic")
    #[arg(long)]
    c0: Option<String>,
    /// First barrier coupling
    #[arg(long)]
    c1: Option<String>,
    /// Second barrier coupling
    #[arg(long)]
    c2: Option<String>,
    /// Oscillator frequency
    #[arg(long)]
    omega: Option<String>,
    /// Planck constant
    #[arg(long)]
    hbar: Option<String>,
    /// Largest module label p for scan/spectrum
    #[arg(long = "p-max")]
    p_max: Option<u32>,
    /// Number of levels to tabulate or solve for
    #[arg(long)]
    levels: Option<u32>,
    /// Coarsest grid size for the numeric solver
    #[arg(long)]
    grid: Option<usize>,
    /// Domain radius for the numeric solver (defaults per model)
    #[arg(long)]
    rmax: Option<f64>,
    /// Relative tolerance for oracle agreement
    #[arg(long)]
    tol: Option<f64>,
    /// JSON config file; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    let (name, args): (&'static str, &CommonArgs) = match &cli.command {
        Command::Verify(a) => ("verify", a),
        Command::Spectrum(a) => ("spectrum", a),
        Command::Oracle(a) => ("oracle", a),
        Command::Scan(a) => ("scan", a),
    };
    let cfg = config::resolve(name, args)?;
    let (report, code) = match name {
        "verify" => commands::run_verify(&cfg)?,
        "spectrum" => commands::run_spectrum(&cfg)?,
        "oracle" => commands::run_oracle(&cfg)?,
        _ => commands::run_scan(&cfg)?,
    };
    report::emit(&report, &cfg).map_err(CliError::Io)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    // Timing is observability, not part of the (byte-stable) report.
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
