use serde::{Deserialize, Serialize};

use super::CcpBehavior;
use crate::{Error, Result};

/// Sender input split as `X = (x₀, x)` with `x₀ ∈ [shift]`, `x ∈ [settings]`,
/// flattened row-major as `X = x₀ + shift·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInput {
    pub shift: usize,
    pub settings: usize,
}

impl FactoredInput {
    pub fn flatten(&self, x0: usize, x: usize) -> usize {
        x0 + self.shift * x
    }

    pub fn split(&self, sender_input: usize) -> (usize, usize) {
        (sender_input % self.shift, sender_input / self.shift)
    }
}

/// A CCP in scenario `(N_A, N_B, M, G)` with score
/// `Σ_{g,X,Y} t[g][X][Y]·p(g|X,Y)`.
///
/// Coefficients are stored flat, indexed `(X·N_B + Y)·G + g`, the same layout
/// as [`CcpBehavior`] probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "TaskRepr")]
pub struct CcpTask {
    sender_inputs: usize,
    receiver_inputs: usize,
    messages: usize,
    guesses: usize,
    coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factored: Option<FactoredInput>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TaskRepr {
    sender_inputs: usize,
    receiver_inputs: usize,
    messages: usize,
    guesses: usize,
    coeffs: Vec<f64>,
    #[serde(default)]
    factored: Option<FactoredInput>,
}

impl TryFrom<TaskRepr> for CcpTask {
    type Error = Error;

    fn try_from(r: TaskRepr) -> Result<Self> {
        let task = CcpTask::new(r.sender_inputs, r.receiver_inputs, r.messages, r.guesses, r.coeffs)?;
        match r.factored {
            Some(f) => task.with_factored_input(f),
            None => Ok(task),
        }
    }
}

impl CcpTask {
    pub fn new(
        sender_inputs: usize,
        receiver_inputs: usize,
        messages: usize,
        guesses: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        if sender_inputs == 0 || receiver_inputs == 0 || messages == 0 || guesses == 0 {
            return Err(Error::dims("scenario cardinalities must be positive"));
        }
        if messages >= sender_inputs {
            return Err(Error::invalid(format!(
                "message alphabet {messages} must be smaller than the sender input set {sender_inputs}"
            )));
        }
        if coeffs.len() != sender_inputs * receiver_inputs * guesses {
            return Err(Error::dims(format!(
                "expected {} score coefficients, got {}",
                sender_inputs * receiver_inputs * guesses,
                coeffs.len()
            )));
        }
        Ok(Self {
            sender_inputs,
            receiver_inputs,
            messages,
            guesses,
            coeffs,
            factored: None,
        })
    }

    pub fn with_factored_input(mut self, f: FactoredInput) -> Result<Self> {
        if f.shift * f.settings != self.sender_inputs {
            return Err(Error::dims(format!(
                "factored input {}×{} does not cover {} sender inputs",
                f.shift, f.settings, self.sender_inputs
            )));
        }
        self.factored = Some(f);
        Ok(self)
    }

    pub fn sender_inputs(&self) -> usize {
        self.sender_inputs
    }

    pub fn receiver_inputs(&self) -> usize {
        self.receiver_inputs
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn guesses(&self) -> usize {
        self.guesses
    }

    pub fn factored(&self) -> Option<FactoredInput> {
        self.factored
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize, x: usize, y: usize) -> f64 {
        self.coeffs[(x * self.receiver_inputs + y) * self.guesses + g]
    }

    pub fn matches(&self, p: &CcpBehavior) -> bool {
        p.sender_inputs() == self.sender_inputs
            && p.receiver_inputs() == self.receiver_inputs
            && p.guesses() == self.guesses
    }
}

/// `Σ t[g][X][Y]·p(g|X,Y)`.
pub fn score(task: &CcpTask, p: &CcpBehavior) -> Result<f64> {
    if !task.matches(p) {
        return Err(Error::dims("behavior does not match the task scenario"));
    }
    Ok(task.coeffs.iter().zip(p.probs()).map(|(t, q)| t * q).sum())
}
