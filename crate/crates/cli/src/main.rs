//! Command-line front end: sweeps, capacity search, turning points,
//! backflow measure, shot-noise emulation, and the self-check battery.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 validation
//! failure.

mod commands;
mod config;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "thermoswitch", version, about = "Thermal channels in a quantum switch: theory curves and measurement emulation")]
struct Cli {
    /// TOML configuration file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// RNG seed; overrides THERMOSWITCH_SEED and the config file
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit JSON numbers at full precision instead of 6 digits
    #[arg(long, global = true)]
    full_precision: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Bath temperature: `zero`, `inf`, or a positive kT
    #[arg(long)]
    temperature: Option<String>,
    /// Input mixing weight p in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Number of strength grid points
    #[arg(long)]
    grid: Option<usize>,
    /// Output file
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(clap::Args)]
struct CapacityArgs {
    #[arg(long)]
    temperature: Option<String>,
    /// Thermalization strength s in [0, 1]
    #[arg(long)]
    s: Option<f64>,
    /// Use the definite-order configuration (control in |0⟩⟨0|)
    #[arg(long)]
    switch_off: bool,
    /// Optional JSON report file
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CurveArgs {
    #[arg(long)]
    temperature: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Use the definite-order configuration (control in |0⟩⟨0|)
    #[arg(long)]
    switch_off: bool,
}

#[derive(clap::Args)]
struct EmulateArgs {
    #[arg(long)]
    temperature: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Shots per measurement setting
    #[arg(long)]
    shots: Option<u64>,
    /// Monte Carlo trials
    #[arg(long)]
    trials: Option<usize>,
    /// Output prefix; writes <prefix>_counts.<ext> and <prefix>_metrics.json
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(clap::Args)]
struct ValidateArgs {
    /// Number of strength grid points in the battery
    #[arg(long)]
    grid: Option<usize>,
    /// Feed a deliberately defective Kraus set into the battery
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the thermalization strength and write the theory curves
    Sweep(SweepArgs),
    /// Maximize I(A:CM) over the input family at fixed strength
    Capacity(CapacityArgs),
    /// Locate the strength where information starts flowing back
    TurningPoint(CurveArgs),
    /// Information-backflow measure past the turning point
    Nonmarkov(CurveArgs),
    /// Emulate the shot-noise tomography pipeline
    Emulate(EmulateArgs),
    /// Run the numeric self-check battery
    Validate(ValidateArgs),
}

/// Error with a dedicated process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validation(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Io(m) => write!(f, "{m}"),
            Self::Validation(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Validation(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli.config.as_deref();
    match &cli.command {
        Command::Sweep(args) => {
            let merger = config::Merger::load(config_path, "sweep")?;
            commands::cmd_sweep(&merger, args, cli.full_precision)
        }
        Command::Capacity(args) => {
            let merger = config::Merger::load(config_path, "capacity")?;
            commands::cmd_capacity(&merger, args, cli.full_precision)
        }
        Command::TurningPoint(args) => {
            let merger = config::Merger::load(config_path, "turning-point")?;
            commands::cmd_turning_point(&merger, args)
        }
        Command::Nonmarkov(args) => {
            let merger = config::Merger::load(config_path, "nonmarkov")?;
            commands::cmd_nonmarkov(&merger, args)
        }
        Command::Emulate(args) => {
            let merger = config::Merger::load(config_path, "emulate")?;
            commands::cmd_emulate(&merger, args, cli.seed, cli.full_precision)
        }
        Command::Validate(args) => {
            let merger = config::Merger::load(config_path, "validate")?;
            commands::cmd_validate(&merger, args, cli.seed)
        }
    }
}
