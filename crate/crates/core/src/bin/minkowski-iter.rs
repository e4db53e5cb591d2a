use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use minkowski_iter::experiment::{
    cmd_fixed_point, cmd_iterate, cmd_multipliers, cmd_psi, cmd_verify_all, exit_code, parse_grid, ExperimentConfig,
    Outcome, Overrides,
};
use minkowski_iter::{Error, Result};

#[derive(Parser)]
#[command(name = "minkowski-iter", version, about = "Iterated Minkowski valuations: experiments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment file ("format": 1)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Grid size as NxM (theta rings x longitudes)
    #[arg(long, global = true)]
    grid: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Multiplier tables, spectral gap, decay and derivative identity
    Multipliers,
    /// Normalized iteration trace
    Iterate,
    /// Fixed-point residuals over an amplitude sweep
    FixedPoint,
    /// Volume ratio over an amplitude sweep
    Psi,
    /// All of the above
    VerifyAll,
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let grid = cli.grid.as_deref().map(parse_grid).transpose()?;
    cfg.apply(Overrides {
        seed: cli.seed,
        k_max: cli.kmax,
        grid,
    })?;
    let run = match cli.command {
        Command::Multipliers => cmd_multipliers,
        Command::Iterate => cmd_iterate,
        Command::FixedPoint => cmd_fixed_point,
        Command::Psi => cmd_psi,
        Command::VerifyAll => cmd_verify_all,
    };
    run(&cfg, &cli.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(outcome) => {
            for c in &outcome.checks {
                println!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(reason) = &outcome.invalid {
                eprintln!("error: run stopped on an invalid body: {reason}");
                3
            } else if let Some(c) = outcome.first_failure() {
                eprintln!("error: check failed: {}", c.name);
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Config(_) = e {
                eprintln!("hint: see crates/core/configs/ for sample files");
            }
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
