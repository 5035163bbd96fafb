use serde::{Deserialize, Serialize};

use super::{LHV_ENUMERATION_LIMIT, NO_SIGNALING_TOL};
use crate::error::{checked_pow, guard};
use crate::util::advance;
use crate::quantum::Behavior;
use crate::{Error, Result};

/// `constant + Σ c[a][b][x][y]·p(a,b|x,y)` on two-party behaviors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "BellFunctionalRepr")]
pub struct BellFunctional {
    #[serde(rename = "partyACard")]
    settings_a: usize,
    #[serde(rename = "partyBCard")]
    settings_b: usize,
    #[serde(rename = "outA")]
    outcomes_a: usize,
    #[serde(rename = "outB")]
    outcomes_b: usize,
    /// Same flat layout as [`Behavior::probs`].
    coeffs: Vec<f64>,
    constant: f64,
    lhv_bound: f64,
    /// Set when marginal terms were folded into joint coefficients; the
    /// evaluator then refuses signaling behaviors.
    #[serde(default)]
    requires_no_signaling: bool,
}

/// Best deterministic local assignment for a functional.
#[derive(Clone, Debug, PartialEq)]
pub struct LhvOptimum {
    pub value: f64,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BellFunctionalRepr {
    #[serde(rename = "partyACard")]
    settings_a: usize,
    #[serde(rename = "partyBCard")]
    settings_b: usize,
    #[serde(rename = "outA")]
    outcomes_a: usize,
    #[serde(rename = "outB")]
    outcomes_b: usize,
    coeffs: Vec<f64>,
    constant: f64,
    lhv_bound: f64,
    #[serde(default)]
    requires_no_signaling: bool,
}

impl TryFrom<BellFunctionalRepr> for BellFunctional {
    type Error = Error;

    fn try_from(r: BellFunctionalRepr) -> Result<Self> {
        let f = BellFunctional::new(
            r.settings_a,
            r.settings_b,
            r.outcomes_a,
            r.outcomes_b,
            r.coeffs,
            r.constant,
        )?
        .with_no_signaling_requirement(r.requires_no_signaling);
        if (f.lhv_bound - r.lhv_bound).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "declared lhvBound {} disagrees with enumeration {}",
                r.lhv_bound, f.lhv_bound
            )));
        }
        Ok(f)
    }
}

impl BellFunctional {
    /// Builds the functional and computes its local bound by enumeration.
    pub fn new(
        settings_a: usize,
        settings_b: usize,
        outcomes_a: usize,
        outcomes_b: usize,
        coeffs: Vec<f64>,
        constant: f64,
    ) -> Result<Self> {
        if coeffs.len() != settings_a * settings_b * outcomes_a * outcomes_b {
            return Err(Error::dims(format!(
                "coefficient table has {} entries, expected {}",
                coeffs.len(),
                settings_a * settings_b * outcomes_a * outcomes_b
            )));
        }
        let mut f = Self {
            settings_a,
            settings_b,
            outcomes_a,
            outcomes_b,
            coeffs,
            constant,
            lhv_bound: f64::NAN,
            requires_no_signaling: false,
        };
        f.lhv_bound = f.lhv_optimum()?.value;
        Ok(f)
    }

    pub(crate) fn with_no_signaling_requirement(mut self, required: bool) -> Self {
        self.requires_no_signaling = required;
        self
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

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn lhv_bound(&self) -> f64 {
        self.lhv_bound
    }

    pub fn requires_no_signaling(&self) -> bool {
        self.requires_no_signaling
    }

    pub fn coeff(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.coeffs[((x * self.settings_b + y) * self.outcomes_a + a) * self.outcomes_b + b]
    }

    fn matches(&self, p: &Behavior) -> bool {
        p.settings_a() == self.settings_a
            && p.settings_b() == self.settings_b
            && p.outcomes_a() == self.outcomes_a
            && p.outcomes_b() == self.outcomes_b
    }

    pub fn evaluate(&self, p: &Behavior) -> Result<f64> {
        if !self.matches(p) {
            return Err(Error::dims("behavior does not match functional cardinalities"));
        }
        if self.requires_no_signaling {
            let gap = p.signaling_gap();
            if gap > NO_SIGNALING_TOL {
                return Err(Error::invalid(format!(
                    "functional expands marginals but behavior signals (gap {gap:e})"
                )));
            }
        }
        let dot: f64 = self.coeffs.iter().zip(p.probs()).map(|(c, q)| c * q).sum();
        Ok(self.constant + dot)
    }

    /// Maximum over deterministic local assignments. Alice's assignments are
    /// enumerated in lexicographic order; for each, Bob's best response
    /// decomposes over his settings (smallest outcome on ties), so the
    /// returned maximizer is the lexicographically first one.
    pub fn lhv_optimum(&self) -> Result<LhvOptimum> {
        let alice_count = checked_pow(self.outcomes_a, self.settings_a);
        let total = alice_count.saturating_mul(checked_pow(self.outcomes_b, self.settings_b));
        guard("deterministic local strategies", total, LHV_ENUMERATION_LIMIT)?;

        let mut best = LhvOptimum {
            value: f64::NEG_INFINITY,
            alice: vec![],
            bob: vec![],
        };
        let mut alice = vec![0usize; self.settings_a];
        let mut bob = vec![0usize; self.settings_b];
        loop {
            let mut value = self.constant;
            for (y, slot) in bob.iter_mut().enumerate() {
                let mut best_b = (f64::NEG_INFINITY, 0);
                for b in 0..self.outcomes_b {
                    let s: f64 = alice
                        .iter()
                        .enumerate()
                        .map(|(x, &a)| self.coeff(a, b, x, y))
                        .sum();
                    if s > best_b.0 + 1e-12 {
                        best_b = (s, b);
                    }
                }
                *slot = best_b.1;
                value += best_b.0;
            }
            if value > best.value + 1e-12 {
                best = LhvOptimum {
                    value,
                    alice: alice.clone(),
                    bob: bob.clone(),
                };
            }
            if !advance(&mut alice, self.outcomes_a) {
                break;
            }
        }
        Ok(best)
    }

    /// The same functional with the parties' roles exchanged.
    pub fn swapped(&self) -> Result<BellFunctional> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for y in 0..self.settings_b {
            for x in 0..self.settings_a {
                for b in 0..self.outcomes_b {
                    for a in 0..self.outcomes_a {
                        coeffs.push(self.coeff(a, b, x, y));
                    }
                }
            }
        }
        Ok(BellFunctional::new(
            self.settings_b,
            self.settings_a,
            self.outcomes_b,
            self.outcomes_a,
            coeffs,
            self.constant,
        )?
        .with_no_signaling_requirement(self.requires_no_signaling))
    }

    /// Critical visibility of `p` against uniform noise: the `v` at which
    /// `v·p + (1−v)·uniform` reaches the local bound. `None` when `p` does not
    /// violate the bound.
    pub fn violation_threshold(&self, p: &Behavior) -> Result<Option<f64>> {
        let at_p = self.evaluate(p)?;
        let at_noise = self.evaluate(&p.mix_with_uniform(0.0)?)?;
        if at_p <= self.lhv_bound {
            return Ok(None);
        }
        Ok(Some((self.lhv_bound - at_noise) / (at_p - at_noise)))
    }
}

/// Binary-outcome functional in Collins–Gisin form:
/// `−Σ_x α_x P_A(0|x) − Σ_y β_y P_B(0|y) + Σ_{x,y} T_{xy} P(0,0|x,y)` with
/// `marginal_a = −α`, `marginal_b = −β` stored with their signs.
#[derive(Clone, Debug, PartialEq)]
pub struct CollinsGisinForm {
    pub marginal_a: Vec<f64>,
    pub marginal_b: Vec<f64>,
    /// Row-major `settings_a × settings_b`.
    pub joint: Vec<Vec<f64>>,
}

impl CollinsGisinForm {
    /// Expands the marginals into full-probability coefficients using the
    /// reference settings `y = 0` (for `P_A`) and `x = 0` (for `P_B`).
    pub fn to_bell_functional(&self) -> Result<BellFunctional> {
        let (sa, sb) = (self.marginal_a.len(), self.marginal_b.len());
        if self.joint.len() != sa || self.joint.iter().any(|row| row.len() != sb) {
            return Err(Error::dims("joint table does not match marginal lengths"));
        }
        let mut coeffs = vec![0.0; sa * sb * 4];
        let idx = |a: usize, b: usize, x: usize, y: usize| ((x * sb + y) * 2 + a) * 2 + b;
        for (x, &alpha) in self.marginal_a.iter().enumerate() {
            for b in 0..2 {
                coeffs[idx(0, b, x, 0)] += alpha;
            }
        }
        for (y, &beta) in self.marginal_b.iter().enumerate() {
            for a in 0..2 {
                coeffs[idx(a, 0, 0, y)] += beta;
            }
        }
        for (x, row) in self.joint.iter().enumerate() {
            for (y, &t) in row.iter().enumerate() {
                coeffs[idx(0, 0, x, y)] += t;
            }
        }
        Ok(BellFunctional::new(sa, sb, 2, 2, coeffs, 0.0)?.with_no_signaling_requirement(true))
    }

    /// Direct evaluation from marginals and joint terms, without expansion.
    pub fn evaluate(&self, p: &Behavior) -> f64 {
        let mut v = 0.0;
        for (x, &alpha) in self.marginal_a.iter().enumerate() {
            v += alpha * p.marginal_a(0, x, 0);
        }
        for (y, &beta) in self.marginal_b.iter().enumerate() {
            v += beta * p.marginal_b(0, 0, y);
        }
        for (x, row) in self.joint.iter().enumerate() {
            for (y, &t) in row.iter().enumerate() {
                v += t * p.p(0, 0, x, y);
            }
        }
        v
    }
}
