use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use sha2::{Digest, Sha256};

use super::checkpoint::{Checkpoint, RunMeta, RunState};
use super::report::{
    ArgminStrategy, ShardStats, StrategyNote, SweepReport, PASS_TOL, REPORT_SCHEMA_VERSION,
    REVIEW_TOL,
};
use super::{Keyer, Shard, StrategySpace, SweepConfig};
use crate::ccp::{quantum_ccp_behavior, CcpBehavior};
use crate::polytope::{VertexSet, VisibilityProblem, VisibilityStatus};
use crate::quantum::Behavior;
use crate::{Error, Result};

/// Strategy indices assigned to one shard, in processing order.
enum WorkList {
    Range(u64, u64),
    List(Vec<u64>),
}

impl WorkList {
    fn new(cfg: &SweepConfig) -> Self {
        let total = cfg.space.size();
        let (lo, hi) = cfg.shard.range(total);
        match cfg.sample {
            None => WorkList::Range(lo, hi),
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                let mut picks: Vec<u64> =
                    rand::seq::index::sample(&mut rng, total as usize, s.size as usize)
                        .into_iter()
                        .map(|i| i as u64)
                        .collect();
                picks.extend(&cfg.include);
                picks.sort_unstable();
                picks.dedup();
                picks.retain(|&mu| mu >= lo && mu < hi);
                WorkList::List(picks)
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            WorkList::Range(lo, hi) => (hi - lo) as usize,
            WorkList::List(v) => v.len(),
        }
    }

    fn slice(&self, start: usize, end: usize) -> Vec<u64> {
        match self {
            WorkList::Range(lo, _) => (lo + start as u64..lo + end as u64).collect(),
            WorkList::List(v) => v[start..end].to_vec(),
        }
    }
}

/// Identifies everything that determines a shard's results, except the
/// shard index (so shards of one run can be merged).
fn fingerprint(p: &Behavior, cfg: &SweepConfig, solve_lp: bool) -> String {
    let doc = serde_json::json!({
        "behavior": p.probs().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        "space": cfg.space,
        "shardCount": cfg.shard.count,
        "sample": cfg.sample,
        "include": cfg.include,
        "tolerance": cfg.dedup_tolerance.to_bits(),
        "chunkSize": cfg.chunk_size,
        "solveLp": solve_lp,
    });
    let digest = Sha256::digest(doc.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Sweeps the configured strategies, solving the simulability LP (against
/// uniform guess noise) once per distinct induced behavior.
pub fn sweep_simulability(p: &Behavior, vertices: &VertexSet, cfg: &SweepConfig) -> Result<SweepReport> {
    if vertices.scenario() != cfg.space.scenario() {
        return Err(Error::dims("vertex set was built for a different CCP scenario"));
    }
    run(p, Some(vertices), cfg)
}

/// Dedup-only pass: counts distinct induced behaviors without solving LPs.
pub fn count_distinct(p: &Behavior, cfg: &SweepConfig) -> Result<SweepReport> {
    run(p, None, cfg)
}

fn run(p: &Behavior, vertices: Option<&VertexSet>, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let keyer = Keyer::new(cfg.space, p, cfg.dedup_tolerance)?;
    let work = WorkList::new(cfg);
    let chunks_total = work.len().div_ceil(cfg.chunk_size);
    let fp = fingerprint(p, cfg, vertices.is_some());
    let meta = RunMeta {
        behavior: cfg.behavior_name.clone(),
        space: cfg.space,
        mode: cfg.mode().to_string(),
        sample_size: cfg.sample.map(|s| s.size),
        seed: cfg.sample.map(|s| s.seed),
        dedup_tolerance: cfg.dedup_tolerance,
        key_bits: keyer.key_bits(),
        solve_lp: vertices.is_some(),
    };

    let resumed = match &cfg.checkpoint {
        Some(path) => Checkpoint::load(path)?,
        None => None,
    };
    let mut ck = match resumed {
        Some(c) => {
            if c.fingerprint != fp {
                return Err(Error::Checkpoint(
                    "checkpoint belongs to a different sweep configuration".into(),
                ));
            }
            if c.shard != cfg.shard {
                return Err(Error::Checkpoint(format!(
                    "checkpoint is for shard {}, not {}",
                    c.shard, cfg.shard
                )));
            }
            if c.completed.len() != chunks_total {
                return Err(Error::Checkpoint("chunk count does not match".into()));
            }
            c
        }
        None => Checkpoint {
            fingerprint: fp,
            shard: cfg.shard,
            meta,
            state: RunState::default(),
            completed: vec![false; chunks_total],
            keys: Vec::new(),
        },
    };
    let first = ck.completed.iter().position(|&c| !c).unwrap_or(chunks_total);
    if ck.completed[first..].iter().any(|&c| c) {
        return Err(Error::Checkpoint("completed chunks are not a prefix".into()));
    }

    let mut seen: FxHashSet<u128> = ck.keys.iter().copied().collect();
    let s = cfg.space.scenario();
    let noise = CcpBehavior::uniform(s.sender_inputs, s.receiver_inputs, s.guesses);
    let problem = vertices.map(VisibilityProblem::new);
    let mut processed = 0usize;
    let mut unsaved = 0usize;

    for chunk in first..chunks_total {
        if cfg.stop_after_chunks.is_some_and(|n| processed >= n) {
            break;
        }
        let start = chunk * cfg.chunk_size;
        let mus = work.slice(start, (start + cfg.chunk_size).min(work.len()));
        let keys: Vec<u128> = mus.par_iter().map(|&mu| keyer.key(mu)).collect();
        let mut fresh = Vec::new();
        for (&mu, &key) in mus.iter().zip(&keys) {
            ck.state.visited += 1;
            if seen.insert(key) {
                ck.keys.push(key);
                fresh.push((mu, key));
            }
        }
        if let Some(problem) = &problem {
            let results: Vec<_> = fresh
                .par_iter()
                .map(|&(_, key)| problem.solve(&keyer.behavior(key), &noise))
                .collect();
            for (&(mu, key), result) in fresh.iter().zip(results) {
                record(&mut ck.state, mu, key, result);
            }
        }
        ck.completed[chunk] = true;
        processed += 1;
        unsaved += 1;
        if let Some(path) = &cfg.checkpoint {
            if unsaved >= cfg.checkpoint_every {
                ck.save(path)?;
                unsaved = 0;
            }
        }
    }
    if let Some(path) = &cfg.checkpoint {
        if unsaved > 0 || !path.exists() {
            ck.save(path)?;
        }
    }
    Ok(report_from(&ck.meta, &[&ck], ck.keys.len() as u64))
}

fn record(
    state: &mut RunState,
    mu: u64,
    key: u128,
    result: Result<crate::polytope::VisibilityResult>,
) {
    state.lp_solves += 1;
    let note = |v: Option<f64>, m: Option<String>| StrategyNote {
        mu,
        key: format!("{key:032x}"),
        v_star: v,
        message: m,
    };
    match result {
        Ok(r) if r.status == VisibilityStatus::Optimal => {
            state.max_residual = state.max_residual.max(r.residual);
            if state.min_v_star.is_none_or(|m| r.v_star < m) {
                state.min_v_star = Some(r.v_star);
                state.argmin_mu = Some(mu);
            }
            if r.v_star >= 1.0 - REVIEW_TOL && r.v_star < 1.0 - PASS_TOL {
                state.review.push(note(Some(r.v_star), None));
            }
        }
        Ok(_) => state
            .failures
            .push(note(None, Some("noise behavior lies outside the polytope".into()))),
        Err(e) => state.failures.push(note(None, Some(e.to_string()))),
    }
}

fn shard_stats(c: &Checkpoint) -> ShardStats {
    ShardStats {
        shard_index: c.shard.index,
        shard_count: c.shard.count,
        strategies_visited: c.state.visited,
        distinct_behaviors: c.keys.len() as u64,
        lp_solves: c.state.lp_solves,
        max_residual: c.state.max_residual,
        min_v_star: c.state.min_v_star,
        argmin_mu: c.state.argmin_mu,
    }
}

/// Keeps the lowest-μ note per key, ordered by μ.
fn merge_notes<'a>(notes: impl Iterator<Item = &'a StrategyNote>) -> Vec<StrategyNote> {
    let mut all: Vec<StrategyNote> = notes.cloned().collect();
    all.sort_by_key(|n| n.mu);
    let mut keys = std::collections::HashSet::new();
    all.retain(|n| keys.insert(n.key.clone()));
    all
}

fn report_from(meta: &RunMeta, shards: &[&Checkpoint], distinct: u64) -> SweepReport {
    let mut min: Option<(f64, u64)> = None;
    for c in shards {
        if let (Some(v), Some(mu)) = (c.state.min_v_star, c.state.argmin_mu) {
            if min.is_none_or(|(bv, bmu)| v < bv || (v == bv && mu < bmu)) {
                min = Some((v, mu));
            }
        }
    }
    let space = meta.space;
    let argmin = min.map(|(v, mu)| {
        let st = space.strategy(mu).expect("argmin lies in the space");
        let (e, d) = space.split(mu);
        ArgminStrategy {
            mu,
            encoder_index: e,
            decoder_index: d,
            encoder: st.encoder,
            decoder: st.decoder,
            v_star: v,
        }
    });
    SweepReport {
        schema_version: REPORT_SCHEMA_VERSION,
        behavior: meta.behavior.clone(),
        space,
        mode: meta.mode.clone(),
        sample_size: meta.sample_size,
        seed: meta.seed,
        dedup_tolerance: meta.dedup_tolerance,
        key_bits: meta.key_bits,
        strategies_visited: shards.iter().map(|c| c.state.visited).sum(),
        distinct_behaviors: distinct,
        lp_solves: shards.iter().map(|c| c.state.lp_solves).sum(),
        min_v_star: min.map(|m| m.0),
        argmin,
        max_residual: shards.iter().map(|c| c.state.max_residual).fold(0.0, f64::max),
        shards: shards.iter().map(|c| shard_stats(c)).collect(),
        failures: merge_notes(shards.iter().flat_map(|c| &c.state.failures)),
        review: merge_notes(shards.iter().flat_map(|c| &c.state.review)),
        complete: shards.iter().all(|c| c.is_complete()),
    }
}

/// Combines the checkpoints of all shards of one run, deduplicating across
/// shards.
pub fn merge_shards<P: AsRef<Path>>(paths: &[P]) -> Result<SweepReport> {
    let mut cks = Vec::with_capacity(paths.len());
    for p in paths {
        let c = Checkpoint::load(p.as_ref())?.ok_or_else(|| {
            Error::Checkpoint(format!("{} is missing or empty", p.as_ref().display()))
        })?;
        if !c.is_complete() {
            return Err(Error::Checkpoint(format!(
                "shard {} has not finished",
                c.shard
            )));
        }
        cks.push(c);
    }
    let Some(first) = cks.first() else {
        return Err(Error::invalid("no shards to merge"));
    };
    let (count, fp, meta) = (first.shard.count, first.fingerprint.clone(), first.meta.clone());
    if cks.iter().any(|c| c.fingerprint != fp) {
        return Err(Error::Checkpoint("shards come from different runs".into()));
    }
    cks.sort_by_key(|c| c.shard.index);
    let indices: Vec<usize> = cks.iter().map(|c| c.shard.index).collect();
    if indices != (0..count).collect::<Vec<_>>() {
        return Err(Error::Checkpoint(format!(
            "expected shards 0..{count} exactly once, got {indices:?}"
        )));
    }
    let mut union: FxHashSet<u128> = FxHashSet::default();
    for c in &cks {
        union.extend(c.keys.iter().copied());
    }
    let refs: Vec<&Checkpoint> = cks.iter().collect();
    Ok(report_from(&meta, &refs, union.len() as u64))
}

/// The first occurrence of each distinct behavior among the configured
/// strategies, in processing order. Behaviors are computed directly from the
/// strategy (not from dedup representatives).
pub fn enumerate_strategy_behaviors<'a>(
    p: &'a Behavior,
    cfg: &SweepConfig,
) -> Result<impl Iterator<Item = (u64, CcpBehavior)> + 'a> {
    cfg.validate()?;
    let keyer = Keyer::new(cfg.space, p, cfg.dedup_tolerance)?;
    let work = WorkList::new(cfg);
    let space: StrategySpace = cfg.space;
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    Ok((0..work.len()).filter_map(move |i| {
        let mu = work.slice(i, i + 1)[0];
        if !seen.insert(keyer.key(mu)) {
            return None;
        }
        let st = space.strategy(mu).expect("work list lies in the space");
        Some((mu, quantum_ccp_behavior(p, &st).expect("space matches the behavior")))
    }))
}

/// All shards of an `count`-way split.
pub fn shards(count: usize) -> Result<Vec<Shard>> {
    (0..count).map(|i| Shard::new(i, count)).collect()
}
