//! `breakclause` command line: values uncollateralised forwards and swaps
//! under bilateral default risk, solves par levels, sweeps parameter grids
//! and reproduces the reference tables/figures as CSV files.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure.

use breakclause_cli::config::{RunMode, ScenarioConfig};
use breakclause_cli::runner::{run_single, run_sweep, RunContext};
use breakclause_cli::{presets, CliError, Preset};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "breakclause", version, about = "Counterparty-risk pricing with break clauses")]
struct Cli {
    #[command(subcommand)]
    command: Commands,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for sweeps and presets (default: rayon's choice).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the Monte-Carlo cross-check (run.mc_check_paths > 0).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Commands {
    /// Value the configured scenario at its contractual level.
    Price { config: PathBuf },
    /// Solve the par strike / par rate of the configured scenario.
    Par { config: PathBuf },
    /// Run the configured sweep grid.
    Sweep { config: PathBuf },
    /// Run a named reproduction preset (or emit its expanded configs).
    Preset {
        /// One of: table1, table2, table3, fig1, fig-lambda, fig-swap-that,
        /// fig-swap-lambda.
        name: String,
        /// Write the expanded scenario configs instead of running them.
        #[arg(long)]
        emit_config: bool,
    },
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let ctx = RunContext::new(cli.out, cli.threads, cli.seed);
    match cli.command {
        Commands::Price { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            Ok(vec![run_single(&cfg, RunMode::Price, &ctx)?])
        }
        Commands::Par { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            Ok(vec![run_single(&cfg, RunMode::Par, &ctx)?])
        }
        Commands::Sweep { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            Ok(vec![run_sweep(&cfg, &ctx)?])
        }
        Commands::Preset { name, emit_config } => {
            let preset = Preset::parse(&name)?;
            if emit_config {
                presets::emit_configs(preset, &ctx)
            } else {
                presets::run(preset, &ctx)
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
