use serde::{Deserialize, Serialize};

use super::CcpBehavior;
use crate::quantum::Behavior;
use crate::{Error, Result};

/// Deterministic classical strategy `(E, D)`.
///
/// `encoder[X]` is the message for sender input `X`; `decoder[m + M·Y]` is
/// the guess for message `m` and receiver input `Y`. With a factored sender
/// input `X = x₀ + d·x` this matches the tuple order `(x, x₀)` with `x₀`
/// fastest, and `(Y, m)` with `m` fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassicalStrategy {
    pub receiver_inputs: usize,
    pub messages: usize,
    pub guesses: usize,
    pub encoder: Vec<usize>,
    pub decoder: Vec<usize>,
}

impl ClassicalStrategy {
    pub fn new(
        receiver_inputs: usize,
        messages: usize,
        guesses: usize,
        encoder: Vec<usize>,
        decoder: Vec<usize>,
    ) -> Result<Self> {
        let s = Self {
            receiver_inputs,
            messages,
            guesses,
            encoder,
            decoder,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.decoder.len() != self.messages * self.receiver_inputs {
            return Err(Error::dims(format!(
                "decoder table has {} cells, expected {}",
                self.decoder.len(),
                self.messages * self.receiver_inputs
            )));
        }
        if self.encoder.iter().any(|&m| m >= self.messages) {
            return Err(Error::invalid("encoder emits a message outside [M]"));
        }
        if self.decoder.iter().any(|&g| g >= self.guesses) {
            return Err(Error::invalid("decoder emits a guess outside [G]"));
        }
        Ok(())
    }

    pub fn sender_inputs(&self) -> usize {
        self.encoder.len()
    }

    pub fn guess(&self, x: usize, y: usize) -> usize {
        self.decoder[self.encoder[x] + self.messages * y]
    }

    /// The guess table `g(X, Y)` flattened as `X·N_B + Y`.
    pub fn guess_table(&self) -> Vec<usize> {
        let mut table = Vec::with_capacity(self.sender_inputs() * self.receiver_inputs);
        for x in 0..self.sender_inputs() {
            for y in 0..self.receiver_inputs {
                table.push(self.guess(x, y));
            }
        }
        table
    }

    /// The deterministic behavior `p_λ(g|X,Y) = δ_{g, D(E(X), Y)}`.
    pub fn behavior(&self) -> CcpBehavior {
        CcpBehavior::deterministic(
            self.sender_inputs(),
            self.receiver_inputs,
            self.guesses,
            &self.guess_table(),
        )
        .expect("validated strategy yields a valid table")
    }
}

/// Deterministic entanglement-assisted strategy. The sender's message depends
/// on her Bell outcome `a` and input `(x₀, x)`; the receiver's guess on the
/// message, his outcome `b` and input `y`.
///
/// Flattening: encoder cell `a + outA·(x₀ + shift·x)`, decoder cell
/// `m + M·(b + outB·y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AssistedStrategy {
    pub outcomes_a: usize,
    pub outcomes_b: usize,
    pub shift: usize,
    pub settings_a: usize,
    pub settings_b: usize,
    pub messages: usize,
    pub guesses: usize,
    pub encoder: Vec<usize>,
    pub decoder: Vec<usize>,
}

impl AssistedStrategy {
    pub fn validate(&self) -> Result<()> {
        if self.encoder.len() != self.outcomes_a * self.shift * self.settings_a {
            return Err(Error::dims("encoder table does not cover (a, x₀, x)"));
        }
        if self.decoder.len() != self.messages * self.outcomes_b * self.settings_b {
            return Err(Error::dims("decoder table does not cover (m, b, y)"));
        }
        if self.encoder.iter().any(|&m| m >= self.messages)
            || self.decoder.iter().any(|&g| g >= self.guesses)
        {
            return Err(Error::invalid("strategy table value out of range"));
        }
        Ok(())
    }

    /// `m = a + x₀ mod d`, `g = m + b mod d`. The message never depends on
    /// the setting `x`.
    pub fn additive(d: usize, settings_a: usize, settings_b: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("additive strategy needs d ≥ 2"));
        }
        let mut encoder = Vec::with_capacity(d * d * settings_a);
        for _x in 0..settings_a {
            for x0 in 0..d {
                for a in 0..d {
                    encoder.push((a + x0) % d);
                }
            }
        }
        let mut decoder = Vec::with_capacity(d * d * settings_b);
        for _y in 0..settings_b {
            for b in 0..d {
                for m in 0..d {
                    decoder.push((m + b) % d);
                }
            }
        }
        Ok(Self {
            outcomes_a: d,
            outcomes_b: d,
            shift: d,
            settings_a,
            settings_b,
            messages: d,
            guesses: d,
            encoder,
            decoder,
        })
    }

    pub fn message(&self, a: usize, x0: usize, x: usize) -> usize {
        self.encoder[a + self.outcomes_a * (x0 + self.shift * x)]
    }

    pub fn guess(&self, m: usize, b: usize, y: usize) -> usize {
        self.decoder[m + self.messages * (b + self.outcomes_b * y)]
    }

    pub fn sender_inputs(&self) -> usize {
        self.shift * self.settings_a
    }
}

/// Either strategy kind, tagged `"classical"` or `"bellAssisted"` in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum DeterministicStrategy {
    Classical(ClassicalStrategy),
    BellAssisted(AssistedStrategy),
}

/// `p(g|x₀,x,y) = Σ_{a,b} p(a,b|x,y)·[g = D(E(a,x₀,x), b, y)]`, with sender
/// input flattened as `x₀ + shift·x`.
pub fn quantum_ccp_behavior(p: &Behavior, strat: &AssistedStrategy) -> Result<CcpBehavior> {
    strat.validate()?;
    if p.settings_a() != strat.settings_a
        || p.settings_b() != strat.settings_b
        || p.outcomes_a() != strat.outcomes_a
        || p.outcomes_b() != strat.outcomes_b
    {
        return Err(Error::dims("Bell behavior does not match the strategy's settings/outcomes"));
    }
    let (na, nb, ng) = (strat.sender_inputs(), strat.settings_b, strat.guesses);
    let mut probs = vec![0.0; na * nb * ng];
    for x in 0..strat.settings_a {
        for x0 in 0..strat.shift {
            let sx = x0 + strat.shift * x;
            for y in 0..nb {
                let cell = &mut probs[(sx * nb + y) * ng..(sx * nb + y + 1) * ng];
                for a in 0..strat.outcomes_a {
                    let m = strat.message(a, x0, x);
                    for b in 0..strat.outcomes_b {
                        cell[strat.guess(m, b, y)] += p.p(a, b, x, y);
                    }
                }
            }
        }
    }
    Ok(CcpBehavior::from_parts(na, nb, ng, probs))
}
