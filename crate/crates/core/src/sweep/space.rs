use serde::{Deserialize, Serialize};

use crate::ccp::{AssistedStrategy, CcpBehavior};
use crate::error::{checked_pow, guard};
use crate::polytope::Scenario;
use crate::quantum::Behavior;
use crate::{Error, Result};

/// Upper limit on the number of strategies in a [`StrategySpace`].
pub const STRATEGY_SPACE_LIMIT: u128 = 1 << 30;

/// Largest supported `outA·outB` (subset sums per setting pair are tabulated).
const MAX_JOINT_OUTCOMES: usize = 12;

const MAX_CELLS: usize = 64;

/// Deterministic entanglement-assisted strategies for a Bell scenario with
/// an extra sender input `x₀ ∈ [shift]`.
///
/// Strategy index `μ = e·G^{|dec|} + d`. Digit `k` of `e` (base `M`, least
/// significant first) is the message for encoder cell `k = a + outA·(x₀ +
/// shift·x)`; digit `k` of `d` (base `G`) is the guess for decoder cell
/// `k = m + M·(b + outB·y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StrategySpace {
    pub outcomes_a: usize,
    pub outcomes_b: usize,
    pub shift: usize,
    pub settings_a: usize,
    pub settings_b: usize,
    pub messages: usize,
    pub guesses: usize,
}

impl StrategySpace {
    /// Two outcomes, `x₀ ∈ {0,1}`, three settings each, one-bit messages and
    /// binary guesses: 2¹² encoders × 2¹² decoders.
    pub fn i3322() -> Self {
        Self {
            outcomes_a: 2,
            outcomes_b: 2,
            shift: 2,
            settings_a: 3,
            settings_b: 3,
            messages: 2,
            guesses: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.outcomes_a,
            self.outcomes_b,
            self.shift,
            self.settings_a,
            self.settings_b,
            self.messages,
            self.guesses,
        ];
        if dims.contains(&0) {
            return Err(Error::invalid("strategy space dimensions must be positive"));
        }
        if self.outcomes_a * self.outcomes_b > MAX_JOINT_OUTCOMES {
            return Err(Error::invalid(format!(
                "at most {MAX_JOINT_OUTCOMES} joint outcomes are supported"
            )));
        }
        if self.messages > u8::MAX as usize || self.guesses > u8::MAX as usize {
            return Err(Error::invalid("at most 255 messages and guesses are supported"));
        }
        if self.encoder_cells() > MAX_CELLS || self.decoder_cells() > MAX_CELLS {
            return Err(Error::invalid(format!(
                "encoder and decoder tables are limited to {MAX_CELLS} cells"
            )));
        }
        guard("strategy space", self.size_u128(), STRATEGY_SPACE_LIMIT)
    }

    pub fn encoder_cells(&self) -> usize {
        self.outcomes_a * self.shift * self.settings_a
    }

    pub fn decoder_cells(&self) -> usize {
        self.messages * self.outcomes_b * self.settings_b
    }

    pub fn decoder_count(&self) -> u64 {
        checked_pow(self.guesses, self.decoder_cells()) as u64
    }

    fn size_u128(&self) -> u128 {
        checked_pow(self.messages, self.encoder_cells())
            .saturating_mul(checked_pow(self.guesses, self.decoder_cells()))
    }

    /// Number of strategies. Call [`validate`](Self::validate) first.
    pub fn size(&self) -> u64 {
        self.size_u128() as u64
    }

    /// The CCP scenario the induced behaviors live in.
    pub fn scenario(&self) -> Scenario {
        Scenario {
            sender_inputs: self.shift * self.settings_a,
            receiver_inputs: self.settings_b,
            messages: self.messages,
            guesses: self.guesses,
        }
    }

    pub fn matches(&self, p: &Behavior) -> bool {
        p.settings_a() == self.settings_a
            && p.settings_b() == self.settings_b
            && p.outcomes_a() == self.outcomes_a
            && p.outcomes_b() == self.outcomes_b
    }

    pub fn strategy(&self, mu: u64) -> Result<AssistedStrategy> {
        if mu >= self.size() {
            return Err(Error::invalid(format!("strategy index {mu} out of range")));
        }
        let (e, d) = (mu / self.decoder_count(), mu % self.decoder_count());
        Ok(AssistedStrategy {
            outcomes_a: self.outcomes_a,
            outcomes_b: self.outcomes_b,
            shift: self.shift,
            settings_a: self.settings_a,
            settings_b: self.settings_b,
            messages: self.messages,
            guesses: self.guesses,
            encoder: digits(e, self.messages, self.encoder_cells()),
            decoder: digits(d, self.guesses, self.decoder_cells()),
        })
    }

    pub fn index_of(&self, s: &AssistedStrategy) -> Result<u64> {
        s.validate()?;
        if (s.outcomes_a, s.outcomes_b, s.shift, s.settings_a, s.settings_b, s.messages, s.guesses)
            != (
                self.outcomes_a,
                self.outcomes_b,
                self.shift,
                self.settings_a,
                self.settings_b,
                self.messages,
                self.guesses,
            )
        {
            return Err(Error::dims("strategy does not belong to this space"));
        }
        let e = undigits(&s.encoder, self.messages);
        let d = undigits(&s.decoder, self.guesses);
        Ok(e * self.decoder_count() + d)
    }

    /// `(encoderIndex, decoderIndex)` of `μ`.
    pub fn split(&self, mu: u64) -> (u64, u64) {
        (mu / self.decoder_count(), mu % self.decoder_count())
    }
}

pub(crate) fn digits(mut n: u64, base: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = (n % base as u64) as usize;
            n /= base as u64;
            d
        })
        .collect()
}

fn undigits(ds: &[usize], base: usize) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * base as u64 + d as u64)
}

/// Maps strategies to canonical dedup keys over a fixed Bell behavior.
///
/// For each setting pair the `2^{outA·outB}` subset sums of `p(·,·|x,y)` are
/// clustered (sorted, split at gaps above the tolerance) into classes. Every
/// entry `p(g|X,Y)`, `g < G−1`, of an induced behavior is one of these subset
/// sums, so the behavior is fixed by its class ids up to the tolerance. The
/// ids are packed into a `u128`.
#[derive(Clone, Debug)]
pub struct Keyer {
    space: StrategySpace,
    masks: usize,
    /// Class id per `(x·sb + y)·masks + mask`.
    class: Vec<u16>,
    /// Representative value per `(x·sb + y)·masks + class`.
    representative: Vec<f64>,
    bits: u32,
    max_spread: f64,
}

/// Largest admissible spread of a class; beyond this the tolerance is too
/// coarse for the behavior.
pub const MAX_CLASS_SPREAD: f64 = 1e-9;

impl Keyer {
    pub fn new(space: StrategySpace, p: &Behavior, tolerance: f64) -> Result<Self> {
        space.validate()?;
        if !space.matches(p) {
            return Err(Error::dims("Bell behavior does not match the strategy space"));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::invalid("dedup tolerance must be finite and non-negative"));
        }
        let (oa, ob) = (space.outcomes_a, space.outcomes_b);
        let masks = 1usize << (oa * ob);
        let pairs = space.settings_a * space.settings_b;
        let mut class = vec![0u16; pairs * masks];
        let mut representative = vec![0.0; pairs * masks];
        let mut max_classes = 1usize;
        let mut max_spread: f64 = 0.0;
        for x in 0..space.settings_a {
            for y in 0..space.settings_b {
                let pair = x * space.settings_b + y;
                let block = p.block(x, y);
                let sums: Vec<f64> = (0..masks).map(|mask| subset_sum(block, mask)).collect();
                let mut order: Vec<usize> = (0..masks).collect();
                order.sort_by(|&i, &j| sums[i].total_cmp(&sums[j]).then(i.cmp(&j)));
                let mut id = 0usize;
                let mut first = sums[order[0]];
                representative[pair * masks] = first;
                for w in 0..masks {
                    let cur = sums[order[w]];
                    if w > 0 && cur - sums[order[w - 1]] > tolerance {
                        id += 1;
                        first = cur;
                        representative[pair * masks + id] = cur;
                    }
                    max_spread = max_spread.max(cur - first);
                    class[pair * masks + order[w]] = id as u16;
                }
                max_classes = max_classes.max(id + 1);
            }
        }
        if max_spread > MAX_CLASS_SPREAD {
            return Err(Error::invalid(format!(
                "dedup classes spread over {max_spread:e}; lower the tolerance"
            )));
        }
        let bits = usize::BITS - (max_classes - 1).leading_zeros();
        let s = space.scenario();
        let positions = s.cells() * (s.guesses - 1);
        let total = positions as u128 * bits as u128;
        guard("dedup key bits", total, 128)?;
        Ok(Self {
            space,
            masks,
            class,
            representative,
            bits,
            max_spread,
        })
    }

    pub fn space(&self) -> StrategySpace {
        self.space
    }

    pub fn key_bits(&self) -> u32 {
        let s = self.space.scenario();
        (s.cells() * (s.guesses - 1)) as u32 * self.bits
    }

    pub fn max_spread(&self) -> f64 {
        self.max_spread
    }

    pub fn key(&self, mu: u64) -> u128 {
        let sp = &self.space;
        let (e, d) = sp.split(mu);
        let mut enc = [0u8; MAX_CELLS];
        let mut dec = [0u8; MAX_CELLS];
        fill_digits(e, sp.messages, &mut enc[..sp.encoder_cells()]);
        fill_digits(d, sp.guesses, &mut dec[..sp.decoder_cells()]);
        let (oa, ob, m) = (sp.outcomes_a, sp.outcomes_b, sp.messages);
        let g1 = sp.guesses - 1;
        let mut key = 0u128;
        let mut pos = 0u32;
        for x in 0..sp.settings_a {
            for x0 in 0..sp.shift {
                let ecell = oa * (x0 + sp.shift * x);
                for y in 0..sp.settings_b {
                    let pair = x * sp.settings_b + y;
                    for g in 0..g1 {
                        let mut mask = 0usize;
                        for a in 0..oa {
                            let msg = enc[ecell + a] as usize;
                            for b in 0..ob {
                                if dec[msg + m * (b + ob * y)] as usize == g {
                                    mask |= 1 << (a * ob + b);
                                }
                            }
                        }
                        let c = self.class[pair * self.masks + mask] as u128;
                        key |= c << (pos * self.bits);
                        pos += 1;
                    }
                }
            }
        }
        key
    }

    /// The behavior encoded by a key, built from class representatives.
    pub fn behavior(&self, key: u128) -> CcpBehavior {
        let sp = &self.space;
        let s = sp.scenario();
        let g = s.guesses;
        let mut probs = vec![0.0; s.cells() * g];
        let field = if self.bits == 0 { 0 } else { (1u128 << self.bits) - 1 };
        let mut pos = 0u32;
        for x in 0..sp.settings_a {
            for x0 in 0..sp.shift {
                let sx = x0 + sp.shift * x;
                for y in 0..sp.settings_b {
                    let pair = x * sp.settings_b + y;
                    let cell = &mut probs[(sx * s.receiver_inputs + y) * g..][..g];
                    let mut rest = 1.0;
                    for k in 0..g - 1 {
                        let c = if self.bits == 0 { 0 } else { (key >> (pos * self.bits)) & field };
                        let v = self.representative[pair * self.masks + c as usize];
                        cell[k] = v;
                        rest -= v;
                        pos += 1;
                    }
                    cell[g - 1] = rest.max(0.0);
                }
            }
        }
        CcpBehavior::from_parts(s.sender_inputs, s.receiver_inputs, g, probs)
    }
}

fn subset_sum(block: &[f64], mask: usize) -> f64 {
    block
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, v)| v)
        .sum()
}

fn fill_digits(mut n: u64, base: usize, out: &mut [u8]) {
    for o in out {
        *o = (n % base as u64) as u8;
        n /= base as u64;
    }
}
