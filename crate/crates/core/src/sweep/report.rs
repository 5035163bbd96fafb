use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::StrategySpace;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A run passes when every solved behavior has `v* ≥ 1 − PASS_TOL`.
pub const PASS_TOL: f64 = 1e-6;

/// Behaviors with `v*` in `[1 − REVIEW_TOL, 1 − PASS_TOL)` are listed for review.
pub const REVIEW_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArgminStrategy {
    pub mu: u64,
    pub encoder_index: u64,
    pub decoder_index: u64,
    pub encoder: Vec<usize>,
    pub decoder: Vec<usize>,
    pub v_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategyNote {
    pub mu: u64,
    /// Dedup key, hex.
    pub key: String,
    pub v_star: Option<f64>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ShardStats {
    pub shard_index: usize,
    pub shard_count: usize,
    pub strategies_visited: u64,
    pub distinct_behaviors: u64,
    pub lp_solves: u64,
    pub max_residual: f64,
    pub min_v_star: Option<f64>,
    pub argmin_mu: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub schema_version: u32,
    pub behavior: String,
    pub space: StrategySpace,
    pub mode: String,
    pub sample_size: Option<u64>,
    pub seed: Option<u64>,
    pub dedup_tolerance: f64,
    pub key_bits: u32,
    pub strategies_visited: u64,
    pub distinct_behaviors: u64,
    pub lp_solves: u64,
    pub min_v_star: Option<f64>,
    pub argmin: Option<ArgminStrategy>,
    pub max_residual: f64,
    pub shards: Vec<ShardStats>,
    pub failures: Vec<StrategyNote>,
    pub review: Vec<StrategyNote>,
    pub complete: bool,
}

impl SweepReport {
    /// No LP failures and `min v* ≥ 1 − 1e-6` (vacuously true without LPs).
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.min_v_star.is_none_or(|v| v >= 1.0 - PASS_TOL)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per shard plus a summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "row,shardIndex,shardCount,strategiesVisited,distinctBehaviors,lpSolves,maxResidual,minVStar,argminMu\n",
        );
        let opt_f = |v: Option<f64>| v.map(|v| format!("{v:.17e}")).unwrap_or_default();
        let opt_u = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        for s in &self.shards {
            let _ = writeln!(
                out,
                "shard,{},{},{},{},{},{:e},{},{}",
                s.shard_index,
                s.shard_count,
                s.strategies_visited,
                s.distinct_behaviors,
                s.lp_solves,
                s.max_residual,
                opt_f(s.min_v_star),
                opt_u(s.argmin_mu)
            );
        }
        let _ = writeln!(
            out,
            "summary,,{},{},{},{},{:e},{},{}",
            self.shards.first().map_or(1, |s| s.shard_count),
            self.strategies_visited,
            self.distinct_behaviors,
            self.lp_solves,
            self.max_residual,
            opt_f(self.min_v_star),
            opt_u(self.argmin.as_ref().map(|a| a.mu))
        );
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "behavior           {}", self.behavior);
        let _ = writeln!(out, "mode               {}", self.mode);
        let _ = writeln!(out, "strategies visited {}", self.strategies_visited);
        let _ = writeln!(out, "distinct behaviors {}", self.distinct_behaviors);
        let _ = writeln!(out, "LP solves          {}", self.lp_solves);
        match (&self.min_v_star, &self.argmin) {
            (Some(v), Some(a)) => {
                let _ = writeln!(out, "min v*             {v:.10} at mu = {}", a.mu);
                let _ = writeln!(out, "  encoder {:?}", a.encoder);
                let _ = writeln!(out, "  decoder {:?}", a.decoder);
            }
            _ => {
                let _ = writeln!(out, "min v*             (no LPs solved)");
            }
        }
        let _ = writeln!(out, "max residual       {:e}", self.max_residual);
        let _ = writeln!(out, "failures           {}", self.failures.len());
        let _ = writeln!(out, "flagged for review {}", self.review.len());
        if !self.complete {
            let _ = writeln!(out, "(incomplete: resume from the checkpoint)");
        }
        out
    }
}
