use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `p(g|X,Y)`, stored flat and indexed `(X·N_B + Y)·G + g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CcpBehavior {
    sender_inputs: usize,
    receiver_inputs: usize,
    guesses: usize,
    probs: Vec<f64>,
}

impl CcpBehavior {
    pub fn new(
        sender_inputs: usize,
        receiver_inputs: usize,
        guesses: usize,
        probs: Vec<f64>,
    ) -> Result<Self> {
        if probs.len() != sender_inputs * receiver_inputs * guesses || guesses == 0 {
            return Err(Error::dims(format!(
                "expected {} probabilities, got {}",
                sender_inputs * receiver_inputs * guesses,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= -1e-12)) {
            return Err(Error::invalid(format!("probability {p} is negative")));
        }
        if let Some(c) = probs
            .chunks(guesses)
            .find(|c| (c.iter().sum::<f64>() - 1.0).abs() > 1e-10)
        {
            return Err(Error::invalid(format!(
                "guess distribution sums to {}",
                c.iter().sum::<f64>()
            )));
        }
        Ok(Self {
            sender_inputs,
            receiver_inputs,
            guesses,
            probs,
        })
    }

    /// Construction without validation for callers that build normalized
    /// tables by construction.
    pub(crate) fn from_parts(
        sender_inputs: usize,
        receiver_inputs: usize,
        guesses: usize,
        probs: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(probs.len(), sender_inputs * receiver_inputs * guesses);
        Self {
            sender_inputs,
            receiver_inputs,
            guesses,
            probs,
        }
    }

    pub fn uniform(sender_inputs: usize, receiver_inputs: usize, guesses: usize) -> Self {
        Self::from_parts(
            sender_inputs,
            receiver_inputs,
            guesses,
            vec![1.0 / guesses as f64; sender_inputs * receiver_inputs * guesses],
        )
    }

    /// `p(g|X,Y) = [g = table[X·N_B + Y]]`.
    pub fn deterministic(
        sender_inputs: usize,
        receiver_inputs: usize,
        guesses: usize,
        table: &[usize],
    ) -> Result<Self> {
        if table.len() != sender_inputs * receiver_inputs || table.iter().any(|&g| g >= guesses) {
            return Err(Error::invalid("guess table has wrong length or out-of-range guesses"));
        }
        let mut probs = vec![0.0; table.len() * guesses];
        for (cell, &g) in table.iter().enumerate() {
            probs[cell * guesses + g] = 1.0;
        }
        Ok(Self::from_parts(sender_inputs, receiver_inputs, guesses, probs))
    }

    pub fn sender_inputs(&self) -> usize {
        self.sender_inputs
    }

    pub fn receiver_inputs(&self) -> usize {
        self.receiver_inputs
    }

    pub fn guesses(&self) -> usize {
        self.guesses
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn p(&self, g: usize, x: usize, y: usize) -> f64 {
        self.probs[(x * self.receiver_inputs + y) * self.guesses + g]
    }

    pub fn same_shape(&self, other: &CcpBehavior) -> bool {
        self.sender_inputs == other.sender_inputs
            && self.receiver_inputs == other.receiver_inputs
            && self.guesses == other.guesses
    }

    /// `v·self + (1−v)·other`.
    pub fn mix(&self, other: &CcpBehavior, v: f64) -> Result<CcpBehavior> {
        if !self.same_shape(other) {
            return Err(Error::dims("mixed behaviors differ in shape"));
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(format!("mixing weight {v} outside [0, 1]")));
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

    pub fn mix_with_uniform(&self, v: f64) -> Result<CcpBehavior> {
        self.mix(
            &CcpBehavior::uniform(self.sender_inputs, self.receiver_inputs, self.guesses),
            v,
        )
    }

    pub fn normalization_gap(&self) -> f64 {
        self.probs
            .chunks(self.guesses)
            .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to `other` (infinite on shape mismatch).
    pub fn max_abs_diff(&self, other: &CcpBehavior) -> f64 {
        if !self.same_shape(other) {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
