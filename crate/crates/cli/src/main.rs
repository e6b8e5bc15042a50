use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use gossip_bandits_cli::output::{write_experiment, write_reference, REFERENCE_FILE};
use gossip_bandits_cli::{run_experiment, ExperimentConfig, Sweep};

#[derive(Debug, Parser)]
#[command(name = "gossip-bandits", version, about = "Simulate multi-agent bandits with gossiped arm recommendations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every configured algorithm once over the configured instance.
    Run(Common),
    /// Sweep the exploration exponent over `alpha_values`.
    SweepAlpha(Common),
    /// Sweep the best-to-second gap over `delta_min_values`.
    SweepDelta(Common),
    /// Compare the topologies in `topology_values`.
    SweepTopology(Common),
    /// Write the asymptotic regret constants of the configured instance.
    Constants(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides `seed` in the config).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        config.out = out.clone();
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<()> {
    let (common, sweep) = match &cli.command {
        Command::Run(c) => (c, Some(Sweep::Single)),
        Command::SweepAlpha(c) => (c, Some(Sweep::Alpha)),
        Command::SweepDelta(c) => (c, Some(Sweep::DeltaMin)),
        Command::SweepTopology(c) => (c, Some(Sweep::Topology)),
        Command::Constants(c) => (c, None),
    };
    let config = load(common)?;
    match sweep {
        Some(sweep) => {
            let output = run_experiment(&config, sweep, common.workers)?;
            let (trace, summary) = write_experiment(&config.out, &output)?;
            println!("wrote {} and {}", trace.display(), summary.display());
        }
        None => {
            std::fs::create_dir_all(&config.out)?;
            let path = config.out.join(REFERENCE_FILE);
            write_reference(&path, &config.instance()?)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
