//! Sharded, checkpointed sweep over deterministic entanglement-assisted
//! strategies: each strategy's induced CCP behavior is deduplicated and the
//! distinct ones are tested for classical simulability.

mod checkpoint;
mod config;
mod report;
mod runner;
mod space;

pub use checkpoint::CHECKPOINT_VERSION;
pub use config::{
    SampleSpec, Shard, SweepConfig, DEFAULT_CHUNK_SIZE, DEFAULT_DEDUP_TOLERANCE,
    DEFAULT_SAMPLE_SIZE,
};
pub use report::{
    ArgminStrategy, ShardStats, StrategyNote, SweepReport, PASS_TOL, REPORT_SCHEMA_VERSION,
    REVIEW_TOL,
};
pub use runner::{
    count_distinct, enumerate_strategy_behaviors, merge_shards, shards, sweep_simulability,
};
pub use space::{Keyer, StrategySpace, MAX_CLASS_SPREAD, STRATEGY_SPACE_LIMIT};
