use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::Behavior;
use crate::util::unflatten;
use crate::{Error, Result};

/// N-party behavior with a common outcome alphabet `[d]`.
///
/// Stored flat: the setting tuple (party 0 most significant) selects a block
/// of `d^N` outcome-tuple probabilities (party 0 most significant).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NPartyBehavior {
    settings: Vec<usize>,
    outcomes: usize,
    probs: Vec<f64>,
}

impl NPartyBehavior {
    pub fn new(settings: Vec<usize>, outcomes: usize, probs: Vec<f64>) -> Result<Self> {
        if settings.is_empty() || settings.contains(&0) || outcomes < 2 {
            return Err(Error::dims("need at least one party, positive settings and d ≥ 2"));
        }
        let block = outcomes.pow(settings.len() as u32);
        let inputs: usize = settings.iter().product();
        if probs.len() != block * inputs {
            return Err(Error::dims(format!(
                "expected {} probabilities, got {}",
                block * inputs,
                probs.len()
            )));
        }
        if probs.iter().any(|p| !(*p >= -1e-12)) {
            return Err(Error::invalid("negative probability"));
        }
        if probs
            .chunks(block)
            .any(|c| (c.iter().sum::<f64>() - 1.0).abs() > 1e-10)
        {
            return Err(Error::invalid("a setting block is not normalized"));
        }
        Ok(Self {
            settings,
            outcomes,
            probs,
        })
    }

    pub fn uniform(settings: Vec<usize>, outcomes: usize) -> Self {
        let block = outcomes.pow(settings.len() as u32);
        let inputs: usize = settings.iter().product();
        Self {
            settings,
            outcomes,
            probs: vec![1.0 / block as f64; block * inputs],
        }
    }

    /// Each setting block drawn independently (generally signaling).
    pub fn random<R: Rng + ?Sized>(settings: Vec<usize>, outcomes: usize, rng: &mut R) -> Self {
        let block = outcomes.pow(settings.len() as u32);
        let inputs: usize = settings.iter().product();
        let mut probs = Vec::with_capacity(block * inputs);
        for _ in 0..inputs {
            // Exponential weights give a uniform draw on the simplex.
            let w: Vec<f64> = (0..block).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            probs.extend(w.iter().map(|x| x / total));
        }
        Self {
            settings,
            outcomes,
            probs,
        }
    }

    /// Deterministic local behavior: party `i` answers `responses[i][x_i]`.
    pub fn deterministic(outcomes: usize, responses: &[Vec<usize>]) -> Result<Self> {
        let settings: Vec<usize> = responses.iter().map(Vec::len).collect();
        let n = settings.len();
        let block = outcomes.pow(n as u32);
        let inputs: usize = settings.iter().product();
        let mut probs = vec![0.0; block * inputs];
        for s in 0..inputs {
            let xs = unflatten(s, &settings);
            let mut o = 0;
            for (i, &x) in xs.iter().enumerate() {
                let r = responses[i][x];
                if r >= outcomes {
                    return Err(Error::invalid("deterministic response out of range"));
                }
                o = o * outcomes + r;
            }
            probs[s * block + o] = 1.0;
        }
        Self::new(settings, outcomes, probs)
    }

    pub fn from_two_party(p: &Behavior) -> Result<Self> {
        if p.outcomes_a() != p.outcomes_b() {
            return Err(Error::dims("correlation form needs equal outcome alphabets"));
        }
        Self::new(
            vec![p.settings_a(), p.settings_b()],
            p.outcomes_a(),
            p.probs().to_vec(),
        )
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn block_len(&self) -> usize {
        self.outcomes.pow(self.settings.len() as u32)
    }

    pub fn setting_index(&self, xs: &[usize]) -> usize {
        xs.iter()
            .zip(&self.settings)
            .fold(0, |acc, (&x, &s)| acc * s + x)
    }

    /// Probabilities for one setting tuple, indexed by outcome tuple.
    pub fn block(&self, xs: &[usize]) -> &[f64] {
        let n = self.block_len();
        let s = self.setting_index(xs);
        &self.probs[s * n..(s + 1) * n]
    }

    /// `P_x(Σ o_i ≡ r mod d)` for every residue `r`.
    pub fn sum_distribution(&self, xs: &[usize]) -> Vec<f64> {
        let d = self.outcomes;
        let mut dist = vec![0.0; d];
        for (o, &p) in self.block(xs).iter().enumerate() {
            dist[digit_sum(o, d, self.parties()) % d] += p;
        }
        dist
    }

    pub fn mix(&self, other: &NPartyBehavior, v: f64) -> Result<Self> {
        if self.settings != other.settings || self.outcomes != other.outcomes {
            return Err(Error::dims("mixed behaviors differ in shape"));
        }
        Ok(Self {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(p, q)| v * p + (1.0 - v) * q)
                .collect(),
            ..self.clone()
        })
    }
}

/// Sum of the base-`d` digits of `o` (with `n` digits).
pub(crate) fn digit_sum(mut o: usize, d: usize, n: usize) -> usize {
    let mut s = 0;
    for _ in 0..n {
        s += o % d;
        o /= d;
    }
    s
}
