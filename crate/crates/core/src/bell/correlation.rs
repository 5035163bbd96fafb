use serde::{Deserialize, Serialize};

use super::{BellFunctional, NPartyBehavior, LHV_ENUMERATION_LIMIT};
use crate::error::{checked_pow, guard};
use crate::util::{advance, unflatten};
use crate::{Error, Result};

/// One term `t · P_x(Σ o_i ≡ f mod d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTerm {
    pub settings: Vec<usize>,
    pub r: usize,
    pub weight: f64,
    pub target: usize,
}

/// Full-correlation functional `Σ_x Σ_r t_x^r P_x(Σ_i o_i = f_x^r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "CorrelationRepr")]
pub struct CorrelationFunctional {
    outcomes: usize,
    settings: Vec<usize>,
    terms: Vec<CorrelationTerm>,
    lhv_bound: f64,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CorrelationRepr {
    outcomes: usize,
    settings: Vec<usize>,
    terms: Vec<CorrelationTerm>,
    lhv_bound: f64,
}

impl TryFrom<CorrelationRepr> for CorrelationFunctional {
    type Error = Error;

    fn try_from(r: CorrelationRepr) -> Result<Self> {
        let f = CorrelationFunctional::new(r.outcomes, r.settings, r.terms)?;
        if (f.lhv_bound - r.lhv_bound).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "declared lhvBound {} disagrees with enumeration {}",
                r.lhv_bound, f.lhv_bound
            )));
        }
        Ok(f)
    }
}

impl CorrelationFunctional {
    /// Validates the terms and computes the local bound by enumeration.
    pub fn new(outcomes: usize, settings: Vec<usize>, terms: Vec<CorrelationTerm>) -> Result<Self> {
        if outcomes < 2 || settings.is_empty() || settings.contains(&0) {
            return Err(Error::dims("need d ≥ 2 and at least one party with settings"));
        }
        for t in &terms {
            if t.settings.len() != settings.len()
                || t.settings.iter().zip(&settings).any(|(x, s)| x >= s)
            {
                return Err(Error::dims(format!("term settings {:?} out of range", t.settings)));
            }
            if t.target >= outcomes {
                return Err(Error::invalid(format!("target {} not in [{outcomes}]", t.target)));
            }
        }
        let mut f = Self {
            outcomes,
            settings,
            terms,
            lhv_bound: f64::NAN,
        };
        f.lhv_bound = f.enumerate_lhv()?;
        Ok(f)
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn terms(&self) -> &[CorrelationTerm] {
        &self.terms
    }

    pub fn lhv_bound(&self) -> f64 {
        self.lhv_bound
    }

    pub fn evaluate(&self, p: &NPartyBehavior) -> Result<f64> {
        if p.settings() != self.settings.as_slice() || p.outcomes() != self.outcomes {
            return Err(Error::dims("behavior does not match functional cardinalities"));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.weight * p.sum_distribution(&t.settings)[t.target])
            .sum())
    }

    fn enumerate_lhv(&self) -> Result<f64> {
        let n = self.parties();
        let d = self.outcomes;
        let total = self
            .settings
            .iter()
            .fold(1u128, |acc, &s| acc.saturating_mul(checked_pow(d, s)));
        guard("deterministic local strategies", total, LHV_ENUMERATION_LIMIT)?;
        // All parties' responses concatenated into one odometer.
        let offsets: Vec<usize> = self
            .settings
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        let width: usize = self.settings.iter().sum();
        let mut responses = vec![0usize; width];
        let mut best = f64::NEG_INFINITY;
        loop {
            let value: f64 = self
                .terms
                .iter()
                .filter(|t| {
                    let s: usize = (0..n).map(|i| responses[offsets[i] + t.settings[i]]).sum();
                    s % d == t.target
                })
                .map(|t| t.weight)
                .sum();
            best = best.max(value);
            if !advance(&mut responses, d) {
                break;
            }
        }
        Ok(best)
    }

    /// Two-party functional expanded into full-probability coefficients.
    pub fn to_bell_functional(&self) -> Result<BellFunctional> {
        if self.parties() != 2 {
            return Err(Error::dims("only two-party correlation functionals convert"));
        }
        let d = self.outcomes;
        let (sa, sb) = (self.settings[0], self.settings[1]);
        let mut coeffs = vec![0.0; sa * sb * d * d];
        for t in &self.terms {
            let (x, y) = (t.settings[0], t.settings[1]);
            for a in 0..d {
                let b = (t.target + d - a) % d;
                coeffs[((x * sb + y) * d + a) * d + b] += t.weight;
            }
        }
        BellFunctional::new(sa, sb, d, d, coeffs, 0.0)
    }

    /// Every setting tuple of the scenario, row-major.
    pub(crate) fn setting_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let count: usize = self.settings.iter().product();
        (0..count).map(move |k| unflatten(k, &self.settings))
    }
}
