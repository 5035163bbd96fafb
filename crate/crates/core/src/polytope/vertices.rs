use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::ccp::CcpBehavior;
use crate::error::{checked_pow, guard};
use crate::util::advance;
use crate::{Error, Result};

/// Enumeration limit on `M^{N_A}·G^{M·N_B}`.
pub const VERTEX_ENUMERATION_LIMIT: u128 = 1_000_000_000;

const CACHE_MAGIC: &[u8; 4] = b"BCVS";
const CACHE_VERSION: u32 = 1;
const ENCODERS_PER_TASK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Scenario {
    pub sender_inputs: usize,
    pub receiver_inputs: usize,
    pub messages: usize,
    pub guesses: usize,
}

impl Scenario {
    pub fn new(sender_inputs: usize, receiver_inputs: usize, messages: usize, guesses: usize) -> Result<Self> {
        if sender_inputs == 0 || receiver_inputs == 0 || messages == 0 || guesses == 0 {
            return Err(Error::invalid("scenario dimensions must be positive"));
        }
        if guesses > u8::MAX as usize {
            return Err(Error::invalid("at most 255 guesses are supported"));
        }
        Ok(Self {
            sender_inputs,
            receiver_inputs,
            messages,
            guesses,
        })
    }

    pub fn cells(&self) -> usize {
        self.sender_inputs * self.receiver_inputs
    }

    /// Number of deterministic `(E, D)` pairs.
    pub fn strategy_count(&self) -> u128 {
        checked_pow(self.messages, self.sender_inputs)
            .saturating_mul(checked_pow(self.guesses, self.messages * self.receiver_inputs))
    }

    fn matches(&self, p: &CcpBehavior) -> bool {
        p.sender_inputs() == self.sender_inputs
            && p.receiver_inputs() == self.receiver_inputs
            && p.guesses() == self.guesses
    }
}

/// The distinct deterministic behaviors of a CCP scenario, each stored as its
/// guess table `g(X, Y)` (flattened `X·N_B + Y`), in order of first
/// appearance in the lexicographic `(E, D)` enumeration.
#[derive(Clone, Debug)]
pub struct VertexSet {
    scenario: Scenario,
    tables: Vec<u8>,
    multiplicities: Vec<u64>,
    index: FxHashMap<Box<[u8]>, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct VertexSetDoc {
    scenario: Scenario,
    vertices: Vec<Vec<u8>>,
    multiplicities: Vec<u64>,
}

impl VertexSet {
    fn from_parts(scenario: Scenario, tables: Vec<u8>, multiplicities: Vec<u64>) -> Result<Self> {
        let cells = scenario.cells();
        if tables.len() != cells * multiplicities.len() {
            return Err(Error::dims("vertex tables do not match the vertex count"));
        }
        if tables.iter().any(|&g| g as usize >= scenario.guesses) {
            return Err(Error::invalid("vertex table contains an out-of-range guess"));
        }
        let mut index = FxHashMap::default();
        index.reserve(multiplicities.len());
        for (i, t) in tables.chunks(cells).enumerate() {
            if index.insert(t.into(), i).is_some() {
                return Err(Error::invalid(format!("vertex {i} is a duplicate")));
            }
        }
        Ok(Self {
            scenario,
            tables,
            multiplicities,
            index,
        })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn len(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn table(&self, i: usize) -> &[u8] {
        let c = self.scenario.cells();
        &self.tables[i * c..(i + 1) * c]
    }

    pub fn tables(&self) -> impl Iterator<Item = &[u8]> {
        self.tables.chunks(self.scenario.cells())
    }

    /// Number of `(E, D)` pairs producing vertex `i`.
    pub fn multiplicity(&self, i: usize) -> u64 {
        self.multiplicities[i]
    }

    pub fn find(&self, table: &[u8]) -> Option<usize> {
        self.index.get(table).copied()
    }

    pub fn behavior(&self, i: usize) -> CcpBehavior {
        let s = self.scenario;
        let table: Vec<usize> = self.table(i).iter().map(|&g| g as usize).collect();
        CcpBehavior::deterministic(s.sender_inputs, s.receiver_inputs, s.guesses, &table)
            .expect("stored tables are valid")
    }

    /// Whether a behavior equals one of the vertices exactly.
    pub fn contains(&self, p: &CcpBehavior) -> bool {
        if !self.scenario.matches(p) {
            return false;
        }
        let g = self.scenario.guesses;
        let mut table = Vec::with_capacity(self.scenario.cells());
        for cell in p.probs().chunks(g) {
            match cell.iter().position(|&v| v == 1.0) {
                Some(k) if cell.iter().all(|&v| v == 0.0 || v == 1.0) => table.push(k as u8),
                _ => return false,
            }
        }
        self.find(&table).is_some()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        Self::read_from(&buf)
    }

    /// Binary cache: magic, version, the four dimensions and the vertex count,
    /// then per vertex the one-hot table `[g = g(X,Y)]` packed LSB-first into
    /// bytes, then the multiplicities. All integers little-endian.
    pub fn write_to(&self, out: &mut impl Write) -> Result<()> {
        let s = self.scenario;
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_VERSION.to_le_bytes())?;
        for d in [s.sender_inputs, s.receiver_inputs, s.messages, s.guesses] {
            out.write_all(&(d as u32).to_le_bytes())?;
        }
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        let bits = s.cells() * s.guesses;
        let mut packed = vec![0u8; bits.div_ceil(8)];
        for t in self.tables() {
            packed.fill(0);
            for (cell, &g) in t.iter().enumerate() {
                let bit = cell * s.guesses + g as usize;
                packed[bit / 8] |= 1 << (bit % 8);
            }
            out.write_all(&packed)?;
        }
        for m in &self.multiplicities {
            out.write_all(&m.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(buf: &[u8]) -> Result<Self> {
        let mut r = ByteReader { buf, pos: 0 };
        if r.take(4)? != CACHE_MAGIC {
            return Err(Error::invalid("not a vertex cache file"));
        }
        let version = r.u32()?;
        if version != CACHE_VERSION {
            return Err(Error::invalid(format!("unsupported vertex cache version {version}")));
        }
        let dims = [r.u32()?, r.u32()?, r.u32()?, r.u32()?].map(|d| d as usize);
        let scenario = Scenario::new(dims[0], dims[1], dims[2], dims[3])?;
        let count = usize::try_from(r.u64()?).map_err(|_| Error::invalid("vertex count overflows"))?;
        let bits = scenario.cells() * scenario.guesses;
        let stride = bits.div_ceil(8);
        if buf.len() != r.pos + count * (stride + 8) {
            return Err(Error::invalid("vertex cache has the wrong length"));
        }
        let mut tables = Vec::with_capacity(count * scenario.cells());
        for _ in 0..count {
            let packed = r.take(stride)?;
            for cell in 0..scenario.cells() {
                let hot: Vec<usize> = (0..scenario.guesses)
                    .filter(|g| {
                        let bit = cell * scenario.guesses + g;
                        packed[bit / 8] >> (bit % 8) & 1 == 1
                    })
                    .collect();
                match hot.as_slice() {
                    [g] => tables.push(*g as u8),
                    _ => return Err(Error::invalid("vertex cache entry is not one-hot")),
                }
            }
        }
        let multiplicities = (0..count).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        Self::from_parts(scenario, tables, multiplicities)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = VertexSetDoc {
            scenario: self.scenario,
            vertices: self.tables().map(<[u8]>::to_vec).collect(),
            multiplicities: self.multiplicities.clone(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: VertexSetDoc = serde_json::from_str(s)?;
        if doc.vertices.len() != doc.multiplicities.len() {
            return Err(Error::dims("vertex and multiplicity lists differ in length"));
        }
        if doc.vertices.iter().any(|v| v.len() != doc.scenario.cells()) {
            return Err(Error::dims("vertex table has the wrong number of cells"));
        }
        Self::from_parts(doc.scenario, doc.vertices.concat(), doc.multiplicities)
    }
}

struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let s = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::invalid("vertex cache is truncated"))?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// Enumerates every deterministic `(E, D)` and keeps the distinct guess tables.
///
/// Encoders are visited lexicographically (first sender input most
/// significant), and for each encoder all decoders likewise.
pub fn classical_vertices(
    sender_inputs: usize,
    receiver_inputs: usize,
    messages: usize,
    guesses: usize,
) -> Result<VertexSet> {
    let s = Scenario::new(sender_inputs, receiver_inputs, messages, guesses)?;
    guard("classical strategy space", s.strategy_count(), VERTEX_ENUMERATION_LIMIT)?;
    let encoders = checked_pow(messages, sender_inputs) as usize;

    let blocks: Vec<Vec<(Box<[u8]>, u64)>> = (0..encoders.div_ceil(ENCODERS_PER_TASK))
        .into_par_iter()
        .map(|block| {
            let start = block * ENCODERS_PER_TASK;
            let end = (start + ENCODERS_PER_TASK).min(encoders);
            enumerate_block(&s, start, end)
        })
        .collect();

    let mut index: FxHashMap<Box<[u8]>, usize> = FxHashMap::default();
    let mut tables = Vec::new();
    let mut multiplicities = Vec::new();
    for (table, count) in blocks.into_iter().flatten() {
        match index.get(&table) {
            Some(&i) => multiplicities[i] += count,
            None => {
                index.insert(table.clone(), multiplicities.len());
                tables.extend_from_slice(&table);
                multiplicities.push(count);
            }
        }
    }
    Ok(VertexSet {
        scenario: s,
        tables,
        multiplicities,
        index,
    })
}

/// Distinct tables for encoders `start..end`, in first-appearance order.
fn enumerate_block(s: &Scenario, start: usize, end: usize) -> Vec<(Box<[u8]>, u64)> {
    let radices = vec![s.messages; s.sender_inputs];
    let mut encoder = crate::util::unflatten(start, &radices);
    let mut decoder = vec![0usize; s.messages * s.receiver_inputs];
    let mut table = vec![0u8; s.cells()];
    let mut seen: FxHashMap<Box<[u8]>, usize> = FxHashMap::default();
    let mut out: Vec<(Box<[u8]>, u64)> = Vec::new();
    for _ in start..end {
        loop {
            for (x, &m) in encoder.iter().enumerate() {
                for y in 0..s.receiver_inputs {
                    table[x * s.receiver_inputs + y] = decoder[m + s.messages * y] as u8;
                }
            }
            match seen.get(table.as_slice()) {
                Some(&i) => out[i].1 += 1,
                None => {
                    seen.insert(table.as_slice().into(), out.len());
                    out.push((table.as_slice().into(), 1));
                }
            }
            if !advance(&mut decoder, s.guesses) {
                break;
            }
        }
        advance(&mut encoder, s.messages);
    }
    out
}
