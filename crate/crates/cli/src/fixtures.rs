//! Expected values and tolerances for `reproduce`, frozen in
//! `fixtures/expected.json`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

const FIXTURES: &str = include_str!("../fixtures/expected.json");

pub const FIXTURE_SCHEMA_VERSION: u32 = 1;

/// Slack allowed on an `exact` rational: the scores are short sums of small
/// fractions, so anything beyond rounding noise is a real mismatch.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Fixtures {
    pub schema_version: u32,
    pub targets: Vec<TargetFixture>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TargetFixture {
    pub name: String,
    pub description: String,
    pub checks: Vec<CheckFixture>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckFixture {
    pub quantity: String,
    #[serde(flatten)]
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Expectation {
    /// A rational written `a/b`.
    Exact { value: String },
    Within { value: f64, tolerance: f64 },
    AtMost { value: f64 },
    AtLeast { value: f64 },
    Count { value: u64 },
}

impl Expectation {
    pub fn accepts(&self, v: f64) -> bool {
        match self {
            Expectation::Exact { value } => match parse_ratio(value) {
                Some(r) => (v - *r.numer() as f64 / *r.denom() as f64).abs() <= EXACT_TOL,
                None => false,
            },
            Expectation::Within { value, tolerance } => (v - value).abs() <= *tolerance,
            Expectation::AtMost { value } => v <= *value,
            Expectation::AtLeast { value } => v >= *value,
            Expectation::Count { value } => v == *value as f64,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Expectation::Exact { value } => value.clone(),
            Expectation::Within { value, tolerance } => format!("{} ± {tolerance:e}", number(*value)),
            Expectation::AtMost { value } => format!("<= {}", number(*value)),
            Expectation::AtLeast { value } => format!(">= {}", number(*value)),
            Expectation::Count { value } => value.to_string(),
        }
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            Expectation::Exact { .. } => Some(EXACT_TOL),
            Expectation::Within { tolerance, .. } => Some(*tolerance),
            _ => None,
        }
    }
}

/// Shortest round-trip form, switching to scientific notation for tiny values.
pub fn number(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

pub fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    let (n, d) = s.split_once('/')?;
    let d: i64 = d.trim().parse().ok()?;
    (d != 0).then_some(())?;
    Some(Ratio::new(n.trim().parse().ok()?, d))
}

pub fn load() -> Fixtures {
    let f: Fixtures = serde_json::from_str(FIXTURES).expect("bundled fixtures parse");
    assert_eq!(f.schema_version, FIXTURE_SCHEMA_VERSION, "bundled fixtures schema");
    f
}

impl Fixtures {
    pub fn target(&self, name: &str) -> Option<&TargetFixture> {
        self.targets.iter().find(|t| t.name == name)
    }
}
