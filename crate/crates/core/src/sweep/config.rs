use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StrategySpace;
use crate::{Error, Result};

pub const DEFAULT_DEDUP_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_SAMPLE_SIZE: u64 = 10_000;
pub const DEFAULT_CHUNK_SIZE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Shard {
    pub index: usize,
    pub count: usize,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    pub fn new(index: usize, count: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::invalid(format!("shard {index}/{count} is out of range")));
        }
        Ok(Self { index, count })
    }

    /// `[total·i/n, total·(i+1)/n)`.
    pub fn range(&self, total: u64) -> (u64, u64) {
        let part = |i: usize| ((total as u128 * i as u128) / self.count as u128) as u64;
        (part(self.index), part(self.index + 1))
    }
}

impl Default for Shard {
    fn default() -> Self {
        Self::WHOLE
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

impl FromStr for Shard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (i, n) = s
            .split_once('/')
            .ok_or_else(|| Error::invalid(format!("shard `{s}` is not of the form i/n")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("shard `{s}` is not of the form i/n")))
        };
        Shard::new(parse(i)?, parse(n)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleSpec {
    pub size: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Label copied into the report.
    pub behavior_name: String,
    pub space: StrategySpace,
    pub shard: Shard,
    /// `None` sweeps the whole space.
    pub sample: Option<SampleSpec>,
    /// Extra strategy indices added to a sample.
    pub include: Vec<u64>,
    pub checkpoint: Option<PathBuf>,
    pub dedup_tolerance: f64,
    pub chunk_size: usize,
    /// Chunks between checkpoint writes.
    pub checkpoint_every: usize,
    /// Stop (after writing the checkpoint) once this many chunks have been
    /// processed in this call.
    pub stop_after_chunks: Option<usize>,
}

impl SweepConfig {
    pub fn sampled(behavior_name: impl Into<String>, space: StrategySpace, size: u64, seed: u64) -> Self {
        Self {
            sample: Some(SampleSpec { size, seed }),
            ..Self::full(behavior_name, space)
        }
    }

    pub fn full(behavior_name: impl Into<String>, space: StrategySpace) -> Self {
        Self {
            behavior_name: behavior_name.into(),
            space,
            shard: Shard::WHOLE,
            sample: None,
            include: Vec::new(),
            checkpoint: None,
            dedup_tolerance: DEFAULT_DEDUP_TOLERANCE,
            chunk_size: DEFAULT_CHUNK_SIZE,
            checkpoint_every: 16,
            stop_after_chunks: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        Shard::new(self.shard.index, self.shard.count)?;
        let total = self.space.size();
        if let Some(s) = self.sample {
            if s.size == 0 {
                return Err(Error::invalid("sample size must be positive"));
            }
            if s.size > total {
                return Err(Error::invalid(format!(
                    "sample size {} exceeds the {total} available strategies",
                    s.size
                )));
            }
        }
        if let Some(&mu) = self.include.iter().find(|&&mu| mu >= total) {
            return Err(Error::invalid(format!("included strategy {mu} is out of range")));
        }
        if self.chunk_size == 0 || self.checkpoint_every == 0 {
            return Err(Error::invalid("chunk size and checkpoint interval must be positive"));
        }
        if !(self.dedup_tolerance >= 0.0 && self.dedup_tolerance.is_finite()) {
            return Err(Error::invalid("dedup tolerance must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn mode(&self) -> &'static str {
        if self.sample.is_some() {
            "sampled"
        } else {
            "full"
        }
    }
}
