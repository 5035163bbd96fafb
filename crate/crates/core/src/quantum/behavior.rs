use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const NEGATIVITY_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;

/// Two-party conditional probability table `p(a,b|x,y)`.
///
/// Stored flat, indexed `((x·settings_b + y)·outcomes_a + a)·outcomes_b + b`.
/// Serialized as `{partyACard, partyBCard, outA, outB, probs}` with `probs`
/// nested `[x][y][a][b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "BehaviorRepr", try_from = "BehaviorRepr")]
pub struct Behavior {
    settings_a: usize,
    settings_b: usize,
    outcomes_a: usize,
    outcomes_b: usize,
    probs: Vec<f64>,
}

impl Behavior {
    pub fn new(
        settings_a: usize,
        settings_b: usize,
        outcomes_a: usize,
        outcomes_b: usize,
        probs: Vec<f64>,
    ) -> Result<Self> {
        if settings_a == 0 || settings_b == 0 || outcomes_a == 0 || outcomes_b == 0 {
            return Err(Error::dims("behavior cardinalities must be positive"));
        }
        let block = outcomes_a * outcomes_b;
        if probs.len() != settings_a * settings_b * block {
            return Err(Error::dims(format!(
                "expected {} probabilities, got {}",
                settings_a * settings_b * block,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= -NEGATIVITY_TOL)) {
            return Err(Error::invalid(format!("probability {p} is negative")));
        }
        for (k, chunk) in probs.chunks(block).enumerate() {
            let total: f64 = chunk.iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                let (x, y) = (k / settings_b, k % settings_b);
                return Err(Error::invalid(format!(
                    "p(·,·|{x},{y}) sums to {total}, not 1"
                )));
            }
        }
        Ok(Self {
            settings_a,
            settings_b,
            outcomes_a,
            outcomes_b,
            probs,
        })
    }

    pub fn uniform(settings_a: usize, settings_b: usize, outcomes_a: usize, outcomes_b: usize) -> Self {
        let n = settings_a * settings_b * outcomes_a * outcomes_b;
        let p = 1.0 / (outcomes_a * outcomes_b) as f64;
        Self {
            settings_a,
            settings_b,
            outcomes_a,
            outcomes_b,
            probs: vec![p; n],
        }
    }

    /// Deterministic local behavior `p(a,b|x,y) = [a = alice[x]]·[b = bob[y]]`.
    pub fn deterministic(
        outcomes_a: usize,
        outcomes_b: usize,
        alice: &[usize],
        bob: &[usize],
    ) -> Result<Self> {
        if alice.iter().any(|&a| a >= outcomes_a) || bob.iter().any(|&b| b >= outcomes_b) {
            return Err(Error::invalid("deterministic response out of range"));
        }
        let mut probs = vec![0.0; alice.len() * bob.len() * outcomes_a * outcomes_b];
        for (x, &a) in alice.iter().enumerate() {
            for (y, &b) in bob.iter().enumerate() {
                probs[((x * bob.len() + y) * outcomes_a + a) * outcomes_b + b] = 1.0;
            }
        }
        Self::new(alice.len(), bob.len(), outcomes_a, outcomes_b, probs)
    }

    pub fn settings_a(&self) -> usize {
        self.settings_a
    }

    pub fn settings_b(&self) -> usize {
        self.settings_b
    }

    pub fn outcomes_a(&self) -> usize {
        self.outcomes_a
    }

    pub fn outcomes_b(&self) -> usize {
        self.outcomes_b
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub(crate) fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((x * self.settings_b + y) * self.outcomes_a + a) * self.outcomes_b + b
    }

    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.probs[self.index(a, b, x, y)]
    }

    /// The `outcomes_a × outcomes_b` block for settings `(x, y)`.
    pub fn block(&self, x: usize, y: usize) -> &[f64] {
        let n = self.outcomes_a * self.outcomes_b;
        let start = (x * self.settings_b + y) * n;
        &self.probs[start..start + n]
    }

    pub fn same_shape(&self, other: &Behavior) -> bool {
        self.settings_a == other.settings_a
            && self.settings_b == other.settings_b
            && self.outcomes_a == other.outcomes_a
            && self.outcomes_b == other.outcomes_b
    }

    /// Entrywise `v·p + (1−v)/(outA·outB)`.
    pub fn mix_with_uniform(&self, v: f64) -> Result<Behavior> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(format!("visibility {v} outside [0, 1]")));
        }
        let noise = (1.0 - v) / (self.outcomes_a * self.outcomes_b) as f64;
        Ok(Behavior {
            probs: self.probs.iter().map(|p| v * p + noise).collect(),
            ..self.clone()
        })
    }

    /// `v·self + (1−v)·other`.
    pub fn mix(&self, other: &Behavior, v: f64) -> Result<Behavior> {
        if !self.same_shape(other) {
            return Err(Error::dims("mixed behaviors differ in shape"));
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(format!("mixing weight {v} outside [0, 1]")));
        }
        Ok(Behavior {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(p, q)| v * p + (1.0 - v) * q)
                .collect(),
            ..self.clone()
        })
    }

    /// Alice's marginal `Σ_b p(a,b|x,y)` read at `y`.
    pub fn marginal_a(&self, a: usize, x: usize, y: usize) -> f64 {
        (0..self.outcomes_b).map(|b| self.p(a, b, x, y)).sum()
    }

    /// Bob's marginal `Σ_a p(a,b|x,y)` read at `x`.
    pub fn marginal_b(&self, b: usize, x: usize, y: usize) -> f64 {
        (0..self.outcomes_a).map(|a| self.p(a, b, x, y)).sum()
    }

    /// Largest dependence of either party's marginal on the other party's
    /// setting. Zero for no-signaling behaviors.
    pub fn signaling_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for x in 0..self.settings_a {
            for a in 0..self.outcomes_a {
                let reference = self.marginal_a(a, x, 0);
                for y in 1..self.settings_b {
                    gap = gap.max((self.marginal_a(a, x, y) - reference).abs());
                }
            }
        }
        for y in 0..self.settings_b {
            for b in 0..self.outcomes_b {
                let reference = self.marginal_b(b, 0, y);
                for x in 1..self.settings_a {
                    gap = gap.max((self.marginal_b(b, x, y) - reference).abs());
                }
            }
        }
        gap
    }

    /// Largest deviation from per-setting normalization.
    pub fn normalization_gap(&self) -> f64 {
        self.probs
            .chunks(self.outcomes_a * self.outcomes_b)
            .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BehaviorRepr {
    #[serde(rename = "partyACard")]
    party_a_card: usize,
    #[serde(rename = "partyBCard")]
    party_b_card: usize,
    out_a: usize,
    out_b: usize,
    probs: Vec<Vec<Vec<Vec<f64>>>>,
}

impl From<Behavior> for BehaviorRepr {
    fn from(p: Behavior) -> Self {
        let probs = (0..p.settings_a)
            .map(|x| {
                (0..p.settings_b)
                    .map(|y| {
                        (0..p.outcomes_a)
                            .map(|a| (0..p.outcomes_b).map(|b| p.p(a, b, x, y)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        BehaviorRepr {
            party_a_card: p.settings_a,
            party_b_card: p.settings_b,
            out_a: p.outcomes_a,
            out_b: p.outcomes_b,
            probs,
        }
    }
}

impl TryFrom<BehaviorRepr> for Behavior {
    type Error = Error;

    fn try_from(r: BehaviorRepr) -> Result<Self> {
        let shape_ok = r.probs.len() == r.party_a_card
            && r.probs.iter().all(|row| {
                row.len() == r.party_b_card
                    && row.iter().all(|blk| {
                        blk.len() == r.out_a && blk.iter().all(|o| o.len() == r.out_b)
                    })
            });
        if !shape_ok {
            return Err(Error::dims("probs nesting does not match the declared cardinalities"));
        }
        let flat = r.probs.into_iter().flatten().flatten().flatten().collect();
        Behavior::new(r.party_a_card, r.party_b_card, r.out_a, r.out_b, flat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixing_extremes() {
        let p = Behavior::deterministic(2, 2, &[0, 1, 1], &[1, 0, 0]).unwrap();
        assert_eq!(p.mix_with_uniform(1.0).unwrap(), p);
        assert_eq!(p.mix_with_uniform(0.0).unwrap(), Behavior::uniform(3, 3, 2, 2));
        assert!(p.mix_with_uniform(1.5).is_err());
        assert!(p.mix_with_uniform(-0.1).is_err());
    }

    #[test]
    fn rejects_unnormalized_table() {
        assert!(Behavior::new(1, 1, 2, 2, vec![0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(Behavior::new(1, 1, 2, 2, vec![1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(Behavior::new(1, 1, 2, 2, vec![0.5, 0.5, 0.0]).is_err());
    }

    #[test]
    fn deterministic_is_no_signaling() {
        let p = Behavior::deterministic(3, 3, &[2, 0], &[1, 1]).unwrap();
        assert_eq!(p.signaling_gap(), 0.0);
        assert_eq!(p.p(2, 1, 0, 1), 1.0);
    }

    #[test]
    fn json_layout_is_x_y_a_b() {
        let p = Behavior::deterministic(2, 2, &[1, 0], &[0, 1]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["partyACard"], 2);
        assert_eq!(v["outB"], 2);
        // x=0 (a=1), y=1 (b=1)
        assert_eq!(v["probs"][0][1][1][1], 1.0);
        let back: Behavior = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_rejects_ragged_probs() {
        let text = r#"{"partyACard":1,"partyBCard":1,"outA":2,"outB":2,"probs":[[[[1.0,0.0]]]]}"#;
        assert!(serde_json::from_str::<Behavior>(text).is_err());
    }
}
