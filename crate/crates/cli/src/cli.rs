use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{EventLog, Experiment, FlagOverrides, GraphFormat};

#[derive(Debug, Parser)]
#[command(name = "netgame", version, about = "Simulate and audit a Katz-centrality network formation game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the link-formation dynamics from the null network and write artifacts.
    Simulate(SimulateArgs),
    /// Compare the closed-form centralities and stability bounds with numerics.
    Verify(VerifyArgs),
    /// Check whether a graph from an edge-list file is pairwise stable.
    StabilityCheck(StabilityArgs),
    /// Run the dynamics over a grid of parameters and seeds.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Flat `key = value` run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Start from a named preset instead of the built-in defaults.
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// Players 1..=count pay the discounted cost.
    #[arg(long)]
    pub incentivized_count: Option<usize>,
    /// Base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Proposal cap; a run that reaches it is reported as not converged.
    #[arg(long)]
    pub max_proposals: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    #[command(flatten)]
    pub base: ConfigArgs,
    /// Number of players.
    #[arg(long)]
    pub n: Option<usize>,
    /// Attenuation factor.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Link cost for every player without a discount.
    #[arg(long, conflicts_with = "delta")]
    pub gamma: Option<f64>,
    /// Same as --gamma; the regular cost in an incentivized game.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Discounted link cost of the incentivized players.
    #[arg(long)]
    pub zeta: Option<f64>,
}

impl GameArgs {
    pub fn flags(&self) -> FlagOverrides {
        FlagOverrides {
            n: self.n,
            alpha: self.alpha,
            cost: self.gamma.or(self.delta),
            incentivized_cost: self.zeta,
            ..self.base.flags()
        }
    }
}

impl ConfigArgs {
    pub fn flags(&self) -> FlagOverrides {
        FlagOverrides {
            incentivized_count: self.incentivized_count,
            seed: self.seed,
            max_proposals: self.max_proposals,
            ..FlagOverrides::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Artifact directory. Falls back to the config file, then
    /// $NETGAME_OUT_DIR, then the current directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Number of runs, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[command(flatten)]
    pub out: OutArgs,
    /// Graph formats to write.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<GraphFormat>>,
    /// Which proposals go into events.log.
    #[arg(long, value_enum)]
    pub event_log: Option<EventLog>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Player counts, as a list or start:end[:step].
    #[arg(long, default_value = "3:30")]
    pub n: String,
    /// Attenuation as multiples of 1/(n−1).
    #[arg(long, default_value = "0.25,0.5,0.75")]
    pub alpha_scale: String,
    /// Additional fixed attenuation values.
    #[arg(long)]
    pub alpha: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// Edge-list file; its header fixes the player count.
    pub graph: PathBuf,
    #[command(flatten)]
    pub game: GameArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub base: ConfigArgs,
    /// Player counts, as a list or start:end[:step].
    #[arg(long)]
    pub n: Option<String>,
    /// Attenuation values.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Link costs.
    #[arg(long, conflicts_with = "delta")]
    pub gamma: Option<String>,
    /// Same as --gamma.
    #[arg(long)]
    pub delta: Option<String>,
    /// Discounted costs; a list reports the payoff trend across it.
    #[arg(long)]
    pub zeta: Option<String>,
    /// Runs per parameter point.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}
