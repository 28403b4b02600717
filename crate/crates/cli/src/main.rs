use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cluster;
mod config;
mod metrics;
mod output;
mod simulate;

use config::FileConfig;

/// Seeded local clustering, block-model simulations and citation metrics.
#[derive(Parser, Debug)]
#[command(name = "seedclust", version)]
struct Cli {
    /// TOML file whose keys override the matching command-line flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find the cluster of source papers around a citing-paper topic
    Cluster(cluster::ClusterArgs),
    /// Export the conductance curve and ranking for a seed set
    Sweep(cluster::SweepArgs),
    /// Recovery experiments on a degree-corrected block model
    Simulate(simulate::SimulateArgs),
    /// Citation trends, Lorenz curves, field breakdowns and rank comparison
    Metrics(metrics::MetricsArgs),
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random draw; overrides a spec file's seed (default 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 uses all cores)
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("no topic papers matched {0:?}; try other keywords or drop the area filter")]
    NoTopicPapers(Vec<String>),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Failure::NoTopicPapers(_)) = cause.downcast_ref::<Failure>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<seedclust::Error>() {
            return core_code(e);
        }
    }
    1
}

fn core_code(e: &seedclust::Error) -> u8 {
    match e {
        seedclust::Error::NoSeedsAboveThreshold { .. } => 3,
        seedclust::Error::NoLocalMinimum { .. } => 4,
        _ => 1,
    }
}

fn hint(err: &anyhow::Error) -> Option<&'static str> {
    match exit_code(err) {
        3 => Some("lower --threshold so that some source papers qualify as seeds"),
        4 => Some("adjust --nmin/--nmax or --window, or inspect curve.csv"),
        _ => None,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => Some(FileConfig::load(path)?),
        None => None,
    };
    match cli.command {
        Command::Cluster(mut args) => {
            if let Some(f) = &file {
                f.apply_cluster(&mut args);
            }
            cluster::run_cluster(&args)
        }
        Command::Sweep(mut args) => {
            if let Some(f) = &file {
                f.apply_sweep(&mut args);
            }
            cluster::run_sweep(&args)
        }
        Command::Simulate(mut args) => {
            if let Some(f) = &file {
                f.apply_simulate(&mut args);
            }
            simulate::run(&args)
        }
        Command::Metrics(mut args) => {
            if let Some(f) = &file {
                f.apply_metrics(&mut args);
            }
            metrics::run(&args)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(h) = hint(&err) {
                eprintln!("hint: {h}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
