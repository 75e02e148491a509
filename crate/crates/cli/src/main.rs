use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mgsim::run::{execute, CommandKind, RunArgs};

#[derive(Parser)]
#[command(
    name = "mgsim",
    about = "Techno-economic simulation and sizing of hybrid PV/wind/battery/diesel microgrids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Economics and emissions of serving the load from the grid alone.
    Baseline(CommonArgs),
    /// Full-year hourly dispatch of the configured system plus lifecycle
    /// economics and emissions.
    Simulate(CommonArgs),
    /// Enumerate the configured search space and rank feasible candidates
    /// by net present cost.
    Optimize(CommonArgs),
    /// Write the synthesized hourly load and resource series as CSV.
    Synth(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Scenario configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config `output.directory`, overridable
    /// via MGSIM_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for synthesized series (default: config `output.seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Dispatch strategy override: lf or cc.
    #[arg(long)]
    strategy: Option<String>,
    /// Worker threads for candidate evaluation (optimize only).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Permit outbound network requests (NASA POWER fetch).
    #[arg(long)]
    allow_network: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::Baseline(a) => (CommandKind::Baseline, a),
        Command::Simulate(a) => (CommandKind::Simulate, a),
        Command::Optimize(a) => (CommandKind::Optimize, a),
        Command::Synth(a) => (CommandKind::Synth, a),
    };
    let args = RunArgs {
        command: kind,
        config_path: common.config,
        out_dir: common.out,
        seed: common.seed,
        strategy: common.strategy,
        workers: common.workers,
        allow_network: common.allow_network,
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message().replace('\n', " | "));
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
