//! Flag surface of the `copse` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "copse",
    version,
    about = "Buffered cop decompositions, shortcut partitions, Steiner point removal, tree covers, and distance oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a buffered cop decomposition and dump it as JSON/DOT
    Decompose(StageArgs),
    /// Build the shortcut partition on top of the decomposition
    Partition(StageArgs),
    /// Contract the graph onto a terminal set (Steiner point removal)
    Spr(StageArgs),
    /// Build a (1+epsilon) tree cover by star expansion
    Treecover(StageArgs),
    /// Build and exercise the tree-cover distance oracle
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Run the verifiers for every stage the flags select
    Verify(StageArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleAction {
    /// Build the oracle and persist its cover
    Build(StageArgs),
    /// Answer a single distance query
    Query {
        #[command(flatten)]
        stage: StageArgs,
        u: u32,
        v: u32,
        /// Load a previously saved cover instead of rebuilding
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    /// Measure query latency and size over sampled pairs
    Bench {
        #[command(flatten)]
        stage: StageArgs,
        /// Number of sampled query pairs
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long)]
        cover: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Off,
    Sampled,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Args)]
pub struct StageArgs {
    /// Edge-list input file ("n m" header, then "u v w" lines)
    #[arg(long)]
    pub input: PathBuf,
    /// Excluded-clique parameter (trusted, not certified)
    #[arg(long, default_value_t = 5)]
    pub r: u32,
    /// Decomposition radius in distance units
    #[arg(long)]
    pub delta: Option<f64>,
    /// Stretch budget; stages derive their radii from it
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Scale base of the SPR iteration
    #[arg(long, default_value_t = 16.0)]
    pub zeta: f64,
    /// Terminal ids, one per line or a JSON array
    #[arg(long)]
    pub terminals: Option<PathBuf>,
    /// Seed for sampled verification and benches
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for artifacts
    #[arg(long, default_value = "copse-out")]
    pub out: PathBuf,
    /// Verification level applied after the build
    #[arg(long, value_enum, default_value_t = VerifyLevel::Sampled)]
    pub verify: VerifyLevel,
    /// Extra artifact format next to the JSON
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
