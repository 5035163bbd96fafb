use serde::{Deserialize, Serialize};

use super::VertexSet;
use crate::ccp::CcpBehavior;
use crate::lp::{self, LinearProgram, LpError};
use crate::{Error, Result};

/// Residual contract on the reconstructed mixture.
pub const MIXTURE_RESIDUAL_TOL: f64 = 1e-7;

/// Weights below this are treated as solver noise; anything more negative is
/// an error.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Threshold used by [`is_classically_simulable`].
pub const SIMULABLE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VisibilityStatus {
    Optimal,
    /// Not even the noise behavior lies in the polytope.
    InfeasibleAtZero,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VisibilityResult {
    pub v_star: f64,
    /// Convex weights over the vertices, in vertex order. Empty when
    /// infeasible.
    pub weights: Vec<f64>,
    pub status: VisibilityStatus,
    /// Largest `|Σ_λ w_λ p_λ − (v·target + (1−v)·noise)|` component.
    pub residual: f64,
    pub iterations: usize,
}

/// Reusable LP over a fixed vertex set: columns are built once, only the
/// visibility column and right-hand side change between solves.
///
/// Variables `(w_λ, v, s)` with `v + s = 1`; rows are the mixture equations
/// for every `(X, Y)` and `g < G−1` (the last guess follows from
/// normalization), `Σ w = 1` and `v + s = 1`. Objective `min −v`.
#[derive(Clone, Debug)]
pub struct VisibilityProblem<'a> {
    vertices: &'a VertexSet,
    template: LinearProgram,
}

impl<'a> VisibilityProblem<'a> {
    pub fn new(vertices: &'a VertexSet) -> Self {
        let s = vertices.scenario();
        let g1 = s.guesses - 1;
        let mix_rows = s.cells() * g1;
        let rows = mix_rows + 2;
        let n = vertices.len();
        let mut lp = LinearProgram::new(rows, n + 2);
        for (j, table) in vertices.tables().enumerate() {
            let col = lp.column_mut(j);
            for (cell, &g) in table.iter().enumerate() {
                if (g as usize) < g1 {
                    col[cell * g1 + g as usize] = 1.0;
                }
            }
            col[mix_rows] = 1.0;
        }
        lp.set(mix_rows + 1, n, 1.0);
        lp.set(mix_rows + 1, n + 1, 1.0);
        lp.set_rhs(mix_rows, 1.0);
        lp.set_rhs(mix_rows + 1, 1.0);
        lp.set_cost(n, -1.0);
        Self {
            vertices,
            template: lp,
        }
    }

    pub fn solve(&self, target: &CcpBehavior, noise: &CcpBehavior) -> Result<VisibilityResult> {
        let s = self.vertices.scenario();
        for (name, p) in [("target", target), ("noise", noise)] {
            if p.sender_inputs() != s.sender_inputs
                || p.receiver_inputs() != s.receiver_inputs
                || p.guesses() != s.guesses
            {
                return Err(Error::dims(format!("{name} behavior does not match the vertex set")));
            }
        }
        let g = s.guesses;
        let g1 = g - 1;
        let n = self.vertices.len();
        let mut lp = self.template.clone();
        {
            let vcol = lp.column_mut(n);
            for cell in 0..s.cells() {
                for k in 0..g1 {
                    let i = cell * g + k;
                    vcol[cell * g1 + k] = -(target.probs()[i] - noise.probs()[i]);
                }
            }
        }
        for cell in 0..s.cells() {
            for k in 0..g1 {
                lp.set_rhs(cell * g1 + k, noise.probs()[cell * g + k]);
            }
        }
        let sol = match lp::solve(&lp) {
            Ok(sol) => sol,
            Err(LpError::Infeasible(_)) => {
                return Ok(VisibilityResult {
                    v_star: 0.0,
                    weights: Vec::new(),
                    status: VisibilityStatus::InfeasibleAtZero,
                    residual: f64::NAN,
                    iterations: 0,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let mut weights = sol.x[..n].to_vec();
        if let Some(w) = weights.iter().find(|&&w| w < -WEIGHT_TOL) {
            return Err(LpError::Inaccurate(-w).into());
        }
        for w in &mut weights {
            *w = w.max(0.0);
        }
        let v = sol.x[n].clamp(0.0, 1.0);
        let residual = mixture_residual(self.vertices, &weights, target, noise, v);
        if residual > MIXTURE_RESIDUAL_TOL {
            return Err(LpError::Inaccurate(residual).into());
        }
        Ok(VisibilityResult {
            v_star: v,
            weights,
            status: VisibilityStatus::Optimal,
            residual,
            iterations: sol.iterations,
        })
    }
}

/// Largest violation of `Σ_λ w_λ p_λ = v·target + (1−v)·noise` over all
/// `(g, X, Y)`, together with `|Σ w − 1|`.
pub fn mixture_residual(
    vertices: &VertexSet,
    weights: &[f64],
    target: &CcpBehavior,
    noise: &CcpBehavior,
    v: f64,
) -> f64 {
    let g = vertices.scenario().guesses;
    let mut acc: Vec<f64> = target
        .probs()
        .iter()
        .zip(noise.probs())
        .map(|(t, q)| -(v * t + (1.0 - v) * q))
        .collect();
    for (table, &w) in vertices.tables().zip(weights) {
        if w != 0.0 {
            for (cell, &k) in table.iter().enumerate() {
                acc[cell * g + k as usize] += w;
            }
        }
    }
    let norm = (weights.iter().sum::<f64>() - 1.0).abs();
    acc.iter().fold(norm, |m, r| m.max(r.abs()))
}

/// Largest `v ∈ [0, 1]` such that `v·target + (1−v)·noise` is a convex
/// combination of the vertices.
pub fn max_visibility(
    target: &CcpBehavior,
    noise: &CcpBehavior,
    vertices: &VertexSet,
) -> Result<VisibilityResult> {
    VisibilityProblem::new(vertices).solve(target, noise)
}

/// Whether `target` itself lies in the classical polytope, tested as
/// `v* ≥ 1 − 1e-7` against uniform noise.
pub fn is_classically_simulable(target: &CcpBehavior, vertices: &VertexSet) -> Result<bool> {
    let s = vertices.scenario();
    let noise = CcpBehavior::uniform(s.sender_inputs, s.receiver_inputs, s.guesses);
    let r = max_visibility(target, &noise, vertices)?;
    Ok(r.status == VisibilityStatus::Optimal && r.v_star >= 1.0 - SIMULABLE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::classical_vertices;

    #[test]
    fn vertices_have_full_visibility() {
        let v = classical_vertices(3, 2, 2, 2).unwrap();
        let noise = CcpBehavior::uniform(3, 2, 2);
        for i in [0, v.len() / 2, v.len() - 1] {
            let r = max_visibility(&v.behavior(i), &noise, &v).unwrap();
            assert!((r.v_star - 1.0).abs() < 1e-9);
            assert!(r.residual < 1e-9);
        }
    }

    #[test]
    fn uniform_is_simulable() {
        let v = classical_vertices(3, 2, 2, 3).unwrap();
        assert!(is_classically_simulable(&CcpBehavior::uniform(3, 2, 3), &v).unwrap());
    }

    #[test]
    fn one_bit_cannot_carry_two_bits() {
        // Sender holds X ∈ {0..3}, receiver must output bit Y of X with one
        // message bit. Classical optimum of the success probability is 3/4,
        // so the perfect behavior has v* with v + (1−v)/2 = 3/4.
        let v = classical_vertices(4, 2, 2, 2).unwrap();
        let table: Vec<usize> = (0..4).flat_map(|x| [x & 1, x >> 1]).collect();
        let target = CcpBehavior::deterministic(4, 2, 2, &table).unwrap();
        let r = max_visibility(&target, &CcpBehavior::uniform(4, 2, 2), &v).unwrap();
        assert!(r.v_star < 1.0 - 1e-3);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let v = classical_vertices(2, 2, 2, 2).unwrap();
        let p = CcpBehavior::uniform(3, 2, 2);
        assert!(matches!(max_visibility(&p, &p, &v), Err(Error::DimensionMismatch(_))));
    }
}
