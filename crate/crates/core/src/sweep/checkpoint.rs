//! Checkpoint file layout (integers little-endian):
//!
//! ```text
//! "BCCK" | version u32 | header length u32 | header JSON
//!        | bitmap of completed chunks | key count u64 | keys (u128 each)
//!        | SHA-256 of everything before it
//! ```

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::StrategyNote;
use super::{Shard, StrategySpace};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"BCCK";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct RunState {
    pub visited: u64,
    pub lp_solves: u64,
    pub max_residual: f64,
    pub min_v_star: Option<f64>,
    pub argmin_mu: Option<u64>,
    pub failures: Vec<StrategyNote>,
    pub review: Vec<StrategyNote>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct RunMeta {
    pub behavior: String,
    pub space: StrategySpace,
    pub mode: String,
    pub sample_size: Option<u64>,
    pub seed: Option<u64>,
    pub dedup_tolerance: f64,
    pub key_bits: u32,
    pub solve_lp: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Header {
    fingerprint: String,
    shard: Shard,
    chunks_total: usize,
    meta: RunMeta,
    state: RunState,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Checkpoint {
    pub fingerprint: String,
    pub shard: Shard,
    pub meta: RunMeta,
    pub state: RunState,
    pub completed: Vec<bool>,
    /// Distinct keys in first-seen order.
    pub keys: Vec<u128>,
}

impl Checkpoint {
    pub fn is_complete(&self) -> bool {
        self.completed.iter().all(|&c| c)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = Header {
            fingerprint: self.fingerprint.clone(),
            shard: self.shard,
            chunks_total: self.completed.len(),
            meta: self.meta.clone(),
            state: self.state.clone(),
        };
        let json = serde_json::to_vec(&header).expect("header serializes");
        let mut out = Vec::with_capacity(64 + json.len() + self.keys.len() * 16);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
        out.extend_from_slice(&(json.len() as u32).to_le_bytes());
        out.extend_from_slice(&json);
        let mut bitmap = vec![0u8; self.completed.len().div_ceil(8)];
        for (i, _) in self.completed.iter().enumerate().filter(|(_, &c)| c) {
            bitmap[i / 8] |= 1 << (i % 8);
        }
        out.extend_from_slice(&bitmap);
        out.extend_from_slice(&(self.keys.len() as u64).to_le_bytes());
        for k in &self.keys {
            out.extend_from_slice(&k.to_le_bytes());
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest[..]);
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Checkpoint(m.to_string());
        if buf.len() < 12 + 32 {
            return Err(bad("file is truncated"));
        }
        if &buf[..4] != MAGIC {
            return Err(bad("not a sweep checkpoint"));
        }
        let version = u32::from_le_bytes(buf[4..8].try_into().expect("4 bytes"));
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "written by format version {version}, this build reads {CHECKPOINT_VERSION}"
            )));
        }
        let (body, digest) = buf.split_at(buf.len() - 32);
        if Sha256::digest(body)[..] != *digest {
            return Err(bad("checksum mismatch (truncated or corrupted)"));
        }
        let hlen = u32::from_le_bytes(body[8..12].try_into().expect("4 bytes")) as usize;
        let header: Header = serde_json::from_slice(
            body.get(12..12 + hlen).ok_or_else(|| bad("header is truncated"))?,
        )
        .map_err(|e| Error::Checkpoint(format!("header is malformed: {e}")))?;
        let mut pos = 12 + hlen;
        let blen = header.chunks_total.div_ceil(8);
        let bitmap = body.get(pos..pos + blen).ok_or_else(|| bad("bitmap is truncated"))?;
        let completed = (0..header.chunks_total)
            .map(|i| bitmap[i / 8] >> (i % 8) & 1 == 1)
            .collect();
        pos += blen;
        let count = body
            .get(pos..pos + 8)
            .map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
            .ok_or_else(|| bad("key count is truncated"))? as usize;
        pos += 8;
        if body.len() != pos + count * 16 {
            return Err(bad("key table has the wrong length"));
        }
        let keys = body[pos..]
            .chunks_exact(16)
            .map(|c| u128::from_le_bytes(c.try_into().expect("16 bytes")))
            .collect();
        Ok(Self {
            fingerprint: header.fingerprint,
            shard: header.shard,
            meta: header.meta,
            state: header.state,
            completed,
            keys,
        })
    }

    /// `Ok(None)` for a missing or empty file.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match std::fs::read(path) {
            Ok(buf) if buf.is_empty() => Ok(None),
            Ok(buf) => Self::from_bytes(&buf).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}
