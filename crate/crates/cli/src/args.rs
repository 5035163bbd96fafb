//! Command-line arguments. Each subcommand's arguments double as the body of
//! a `run` config file, so every field has a serde default equal to its clap
//! default.

use std::path::PathBuf;

use bellccp::sweep::{Shard, DEFAULT_CHUNK_SIZE, DEFAULT_DEDUP_TOLERANCE, DEFAULT_SAMPLE_SIZE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Environment variable naming a directory for sweep checkpoints.
pub const CHECKPOINT_DIR_ENV: &str = "BELLCCP_CHECKPOINT_DIR";

pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "bellccp", version, about = "Bell inequalities, communication tasks and classical simulability checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute one published result and compare it with its fixture.
    Reproduce(ReproduceArgs),
    /// Sweep entanglement-assisted strategies and test each distinct behavior
    /// for classical simulability.
    Sweep(SweepArgs),
    /// Merge the checkpoints of a sharded sweep into one report.
    Merge(MergeArgs),
    /// Run a subcommand described by a TOML file.
    Run {
        config: PathBuf,
    },
    /// List the reproducible targets.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    ChshCcp,
    Cglmp3Bound,
    Cglmp3Classical,
    Cglmp3Visibility,
    Cglmp4Classical,
    I3322Hexagon,
    I3322AppcLp,
    CandidateCheck,
    I3322Sweep,
}

impl Target {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BehaviorName {
    /// The two-qubit mixed state with a small I3322 violation.
    #[default]
    Candidate,
    /// The singlet with hexagon measurements.
    Hexagon,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ReproduceArgs {
    pub target: Target,
    /// Strategies sampled by `i3322-sweep`.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
    pub sample: u64,
    /// Sampling seed for `i3322-sweep`.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Dedup tolerance for `i3322-sweep`.
    #[arg(long, default_value_t = DEFAULT_DEDUP_TOLERANCE)]
    pub tolerance: f64,
    /// Report path; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Default for ReproduceArgs {
    fn default() -> Self {
        ReproduceArgs {
            target: Target::ChshCcp,
            sample: DEFAULT_SAMPLE_SIZE,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_DEDUP_TOLERANCE,
            output: None,
            format: Format::Json,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t)]
    pub behavior: BehaviorName,
    /// Number of strategies sampled (default 10000).
    #[arg(long, conflicts_with = "full")]
    pub sample: Option<u64>,
    /// Enumerate all 2^24 strategies. Takes hours.
    #[arg(long)]
    pub full: bool,
    /// Shard `i/n` of the strategy list.
    #[arg(long, default_value = "0/1")]
    #[serde(serialize_with = "ser_shard", deserialize_with = "de_shard")]
    pub shard: Shard,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Add the additive strategy to a sample.
    #[arg(long)]
    pub include_additive: bool,
    /// Checkpoint file. Defaults to a file in $BELLCCP_CHECKPOINT_DIR when set.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Count distinct behaviors without solving LPs.
    #[arg(long)]
    pub dedup_only: bool,
    /// Entries closer than this are treated as equal.
    #[arg(long, default_value_t = DEFAULT_DEDUP_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: usize,
    /// Stop after this many chunks; the checkpoint allows resuming.
    #[arg(long)]
    pub max_chunks: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Default for SweepArgs {
    fn default() -> Self {
        SweepArgs {
            behavior: BehaviorName::Candidate,
            sample: None,
            full: false,
            shard: Shard::WHOLE,
            seed: DEFAULT_SEED,
            include_additive: false,
            checkpoint: None,
            dedup_only: false,
            tolerance: DEFAULT_DEDUP_TOLERANCE,
            chunk_size: DEFAULT_CHUNK_SIZE,
            max_chunks: None,
            output: None,
            format: Format::Json,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct MergeArgs {
    /// Checkpoints of shards 0..n of one sweep.
    #[arg(required = true)]
    pub checkpoints: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Contents of a `run` config file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Reproduce(ReproduceArgs),
    Sweep(SweepArgs),
    Merge(MergeArgs),
}

fn ser_shard<S: Serializer>(s: &Shard, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

fn de_shard<'de, D: Deserializer<'de>>(de: D) -> Result<Shard, D::Error> {
    String::deserialize(de)?.parse().map_err(serde::de::Error::custom)
}
