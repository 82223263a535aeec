mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "toruscauchy", version, about = "Fourier-mode solver and hypoellipticity diagnostics for periodic Cauchy operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verdict cascade; writes verdict.json and scan.csv.
    Diagnose(RunArgs),
    /// Solve L u = f; writes solution.csv, modes.csv and solve.json.
    Solve(RunArgs),
    /// Scan the mean sequences; writes scan.csv.
    Scan(RunArgs),
    /// Build a singular solution; writes solution.csv and singular.json.
    Singular(RunArgs),
    /// Roots of the frozen symbol at every window point; writes roots.csv.
    Roots(RunArgs),
}

#[derive(Args, Clone)]
pub struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use exact declarations for resonance tests and scans.
    #[arg(long)]
    pub exact: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Diagnose(a) => ("diagnose", a),
        Command::Solve(a) => ("solve", a),
        Command::Scan(a) => ("scan", a),
        Command::Singular(a) => ("singular", a),
        Command::Roots(a) => ("roots", a),
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let mut cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    match commands::run(name, &cfg, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
