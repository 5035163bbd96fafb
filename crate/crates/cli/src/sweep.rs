//! `sweep` and `merge`.

use std::path::PathBuf;

use bellccp::ccp::AssistedStrategy;
use bellccp::polytope::classical_vertices;
use bellccp::quantum::{candidate_realization, hexagon_realization, Behavior};
use bellccp::sweep::{
    count_distinct, merge_shards, sweep_simulability, StrategySpace, SweepConfig, SweepReport,
    DEFAULT_SAMPLE_SIZE, REPORT_SCHEMA_VERSION,
};
use bellccp::Result;
use serde::Serialize;

use crate::args::{BehaviorName, MergeArgs, SweepArgs, CHECKPOINT_DIR_ENV};

/// JSON envelope: the resolved arguments next to the report.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepOutput<'a, C: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: &'a C,
    pub report: &'a SweepReport,
}

impl<C: Serialize> SweepOutput<'_, C> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn behavior(name: BehaviorName) -> Result<Behavior> {
    match name {
        BehaviorName::Candidate => candidate_realization()?.behavior(),
        BehaviorName::Hexagon => hexagon_realization()?.behavior(),
    }
}

fn label(name: BehaviorName) -> &'static str {
    match name {
        BehaviorName::Candidate => "candidate",
        BehaviorName::Hexagon => "hexagon",
    }
}

/// Arguments with the sample size and checkpoint path filled in.
pub fn resolve(args: &SweepArgs) -> SweepArgs {
    let mut r = args.clone();
    if !r.full && r.sample.is_none() {
        r.sample = Some(DEFAULT_SAMPLE_SIZE);
    }
    if r.checkpoint.is_none() {
        if let Some(dir) = std::env::var_os(CHECKPOINT_DIR_ENV) {
            let mode = match r.sample {
                Some(n) => format!("sample{n}-seed{}", r.seed),
                None => "full".to_string(),
            };
            let kind = if r.dedup_only { "-dedup" } else { "" };
            let file = format!(
                "{}-{mode}{kind}-shard{}of{}.bcck",
                label(r.behavior),
                r.shard.index,
                r.shard.count
            );
            r.checkpoint = Some(PathBuf::from(dir).join(file));
        }
    }
    r
}

pub fn config(args: &SweepArgs) -> Result<SweepConfig> {
    let space = StrategySpace::i3322();
    let mut cfg = match args.sample {
        Some(n) if !args.full => SweepConfig::sampled(label(args.behavior), space, n, args.seed),
        _ => SweepConfig::full(label(args.behavior), space),
    };
    if args.include_additive && cfg.sample.is_some() {
        cfg.include.push(space.index_of(&AssistedStrategy::additive(2, 3, 3)?)?);
    }
    cfg.shard = args.shard;
    cfg.checkpoint = args.checkpoint.clone();
    cfg.dedup_tolerance = args.tolerance;
    cfg.chunk_size = args.chunk_size;
    cfg.stop_after_chunks = args.max_chunks;
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(args: &SweepArgs) -> Result<SweepReport> {
    let cfg = config(args)?;
    let p = behavior(args.behavior)?;
    if args.full {
        eprintln!(
            "warning: full mode visits {} strategies{}; this takes hours",
            cfg.space.size(),
            if args.dedup_only { "" } else { " and solves an LP per distinct behavior" }
        );
    }
    if args.dedup_only {
        count_distinct(&p, &cfg)
    } else {
        let vertices = classical_vertices(6, 3, 2, 2)?;
        sweep_simulability(&p, &vertices, &cfg)
    }
}

pub fn merge(args: &MergeArgs) -> Result<SweepReport> {
    merge_shards(&args.checkpoints)
}

pub fn envelope<'a, C: Serialize>(command: &'static str, config: &'a C, report: &'a SweepReport) -> SweepOutput<'a, C> {
    SweepOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        command,
        config,
        report,
    }
}
