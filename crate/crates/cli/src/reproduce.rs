//! Pipelines behind `reproduce`.

use std::time::Instant;

use bellccp::bell::{cglmp3_functional, cglmp4_functional, cglmp_correlation, chsh_functional, i3322_functional};
use bellccp::ccp::{
    bell_to_ccp, brute_force_classical_score, optimal_classical_score, quantum_ccp_behavior, score,
    AssistedStrategy, CcpBehavior, ClassicalStrategy,
};
use bellccp::polytope::{classical_vertices, max_visibility};
use bellccp::quantum::{
    candidate_realization, cglmp_optimal_realization, chsh_realization, hexagon_realization,
    horodecki_chsh,
};
use bellccp::sweep::{sweep_simulability, StrategySpace, SweepConfig, SweepReport};
use bellccp::{Error, Result};
use serde::Serialize;

use crate::args::{ReproduceArgs, Target};
use crate::fixtures::{self, Expectation};

pub const REPRODUCE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub quantity: String,
    pub value: f64,
    pub expected: String,
    pub tolerance: Option<f64>,
    pub expectation: Expectation,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproduceReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub target: String,
    pub description: String,
    pub config: ReproduceArgs,
    pub checks: Vec<CheckResult>,
    pub runtime_seconds: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
}

impl ReproduceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,quantity,value,expected,tolerance,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.target,
                c.quantity,
                c.value,
                c.expected,
                c.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                c.pass
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({:.3} s)\n{}\n",
            self.target,
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime_seconds,
            self.description
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<22} {:<24} expected {:<18} {}\n",
                c.quantity,
                fixtures::number(c.value),
                c.expected,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Computed {
    values: Vec<(&'static str, f64)>,
    sweep: Option<SweepReport>,
}

impl From<Vec<(&'static str, f64)>> for Computed {
    fn from(values: Vec<(&'static str, f64)>) -> Self {
        Computed { values, sweep: None }
    }
}

pub fn run(args: &ReproduceArgs) -> Result<ReproduceReport> {
    let fixtures = fixtures::load();
    let name = args.target.name();
    let fixture = fixtures
        .target(&name)
        .ok_or_else(|| Error::InvalidInput(format!("no fixture for {name}")))?;
    let start = Instant::now();
    let computed = compute(args)?;
    let runtime_seconds = start.elapsed().as_secs_f64();

    let mut checks = Vec::new();
    for c in &fixture.checks {
        let value = computed
            .values
            .iter()
            .find(|(q, _)| *q == c.quantity)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::InvalidInput(format!("{name} does not compute {}", c.quantity)))?;
        checks.push(CheckResult {
            quantity: c.quantity.clone(),
            value,
            expected: c.expect.display(),
            tolerance: c.expect.tolerance(),
            expectation: c.expect.clone(),
            pass: c.expect.accepts(value),
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ReproduceReport {
        schema_version: REPRODUCE_SCHEMA_VERSION,
        command: "reproduce",
        target: name,
        description: fixture.description.clone(),
        config: args.clone(),
        checks,
        runtime_seconds,
        pass,
        sweep: computed.sweep,
    })
}

fn compute(args: &ReproduceArgs) -> Result<Computed> {
    Ok(match args.target {
        Target::ChshCcp => {
            let task = bell_to_ccp(&chsh_functional()?)?;
            let p = chsh_realization()?.behavior()?;
            let q = quantum_ccp_behavior(&p, &AssistedStrategy::additive(2, 2, 2)?)?;
            vec![
                ("classicalOptimum", optimal_classical_score(&task)?.value),
                ("additiveQuantumScore", score(&task, &q)?),
            ]
            .into()
        }
        Target::Cglmp3Bound => {
            let f = cglmp3_functional()?;
            let p = cglmp_optimal_realization()?.behavior()?;
            let threshold = f
                .violation_threshold(&p)?
                .ok_or_else(|| Error::InvalidInput("realization does not violate the bound".into()))?;
            vec![
                ("lhvBound", f.lhv_bound()),
                ("quantumValue", f.evaluate(&p)?),
                ("noiseThreshold", threshold),
            ]
            .into()
        }
        Target::Cglmp3Classical => {
            let task = bell_to_ccp(&cglmp_correlation(3)?)?;
            // m = 1 on (x, x0) = (0, 2), m = 2 on (1, 1); g = 2m for y = 0, m + 1 for y = 1
            let explicit = ClassicalStrategy::new(2, 3, 3, vec![0, 0, 1, 0, 2, 0], vec![0, 2, 1, 1, 2, 0])?;
            vec![
                ("encoderSweepOptimum", optimal_classical_score(&task)?.value),
                ("bruteForceOptimum", brute_force_classical_score(&task)?.value),
                ("explicitStrategyScore", score(&task, &explicit.behavior())?),
            ]
            .into()
        }
        Target::Cglmp3Visibility => {
            let vertices = classical_vertices(6, 2, 3, 3)?;
            let p = cglmp_optimal_realization()?.behavior()?;
            let target = quantum_ccp_behavior(&p, &AssistedStrategy::additive(3, 2, 2)?)?;
            let noise = CcpBehavior::uniform(6, 2, 3);
            let r = max_visibility(&target, &noise, &vertices)?;
            let task = bell_to_ccp(&cglmp_correlation(3)?)?;
            let (at_target, at_noise) = (score(&task, &target)?, score(&task, &noise)?);
            vec![
                ("vertexCount", vertices.len() as f64),
                ("vStar", r.v_star),
                ("twoThirdsCrossing", (2.0 / 3.0 - at_noise) / (at_target - at_noise)),
                ("lpResidual", r.residual),
            ]
            .into()
        }
        Target::Cglmp4Classical => {
            let task = bell_to_ccp(&cglmp4_functional()?)?;
            let tuple = ClassicalStrategy::new(2, 4, 4, vec![0, 0, 0, 1, 0, 2, 3, 0], vec![0, 3, 1, 2, 2, 3, 0, 1])?;
            vec![
                ("encoderSweepOptimum", optimal_classical_score(&task)?.value),
                ("tupleStrategyScore", score(&task, &tuple.behavior())?),
            ]
            .into()
        }
        Target::I3322Hexagon => {
            let p = hexagon_realization()?.behavior()?;
            vec![("i3322Value", i3322_functional()?.evaluate(&p)?)].into()
        }
        Target::I3322AppcLp => {
            let vertices = classical_vertices(6, 3, 2, 2)?;
            let p = hexagon_realization()?.behavior()?;
            let target = quantum_ccp_behavior(&p, &AssistedStrategy::additive(2, 3, 3)?)?;
            let r = max_visibility(&target, &CcpBehavior::uniform(6, 3, 2), &vertices)?;
            vec![
                ("vertexCount", vertices.len() as f64),
                ("vStar", r.v_star),
                ("lpResidual", r.residual),
            ]
            .into()
        }
        Target::CandidateCheck => {
            let r = candidate_realization()?;
            vec![
                ("i3322Value", i3322_functional()?.evaluate(&r.behavior()?)?),
                ("horodeckiM", horodecki_chsh(&r.state)?),
            ]
            .into()
        }
        Target::I3322Sweep => {
            let p = candidate_realization()?.behavior()?;
            let vertices = classical_vertices(6, 3, 2, 2)?;
            let mut cfg = SweepConfig::sampled("candidate", StrategySpace::i3322(), args.sample, args.seed);
            cfg.dedup_tolerance = args.tolerance;
            let report = sweep_simulability(&p, &vertices, &cfg)?;
            Computed {
                values: vec![
                    ("minVStar", report.min_v_star.unwrap_or(f64::NAN)),
                    ("maxResidual", report.max_residual),
                    ("lpFailures", report.failures.len() as f64),
                ],
                sweep: Some(report),
            }
        }
    })
}
