use super::{CcpTask, FactoredInput, ADDITIVE_INPUT_LIMIT};
use crate::bell::{CorrelationFunctional, NPartyBehavior};
use crate::error::{checked_pow, guard};
use crate::util::{advance, unflatten};
use crate::{Error, Result};

/// Compiles a two-party correlation functional into its CCP: the sender holds
/// `(x₀, x)` with `x₀ ∈ [d]`, sends `m ∈ [d]`, and the receiver (input `y`)
/// earns `t/d` whenever `g = f + x₀ mod d`. Coefficients do not depend on
/// `x₀` beyond the shifted target.
pub fn bell_to_ccp(f: &CorrelationFunctional) -> Result<CcpTask> {
    if f.parties() != 2 {
        return Err(Error::dims("the concrete CCP is built for two parties"));
    }
    let d = f.outcomes();
    let (sa, sb) = (f.settings()[0], f.settings()[1]);
    let factored = FactoredInput {
        shift: d,
        settings: sa,
    };
    let na = d * sa;
    let mut coeffs = vec![0.0; na * sb * d];
    for term in f.terms() {
        let (x, y) = (term.settings[0], term.settings[1]);
        for x0 in 0..d {
            let big_x = factored.flatten(x0, x);
            let g = (term.target + x0) % d;
            coeffs[(big_x * sb + y) * d + g] += term.weight / d as f64;
        }
    }
    CcpTask::new(na, sb, d, d, coeffs)?.with_factored_input(factored)
}

/// Score of the N-party CCP under the additive protocol: parties
/// `1..N−1` send `m_i = o_i + x₀⁽ⁱ⁾`, party `N` guesses `g = o_N + Σ m_i`,
/// and a point `t/d^{N−1}` is earned when `g = f + Σ x₀⁽ⁱ⁾ (mod d)`.
/// Simulated by explicit enumeration of shifts and outcomes.
pub fn additive_multiparty_score(f: &CorrelationFunctional, p: &NPartyBehavior) -> Result<f64> {
    let n = f.parties();
    if n > 4 {
        return Err(Error::invalid(format!("additive simulation supports N ≤ 4, got {n}")));
    }
    if p.settings() != f.settings() || p.outcomes() != f.outcomes() {
        return Err(Error::dims("behavior does not match functional cardinalities"));
    }
    let d = f.outcomes();
    let inputs = f
        .settings()
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
        .saturating_mul(checked_pow(d, n - 1));
    guard("CCP inputs", inputs, ADDITIVE_INPUT_LIMIT)?;

    let norm = checked_pow(d, n - 1) as f64;
    let outcome_radices = vec![d; n];
    let mut total = 0.0;
    for xs in f.setting_tuples() {
        let terms: Vec<_> = f.terms().iter().filter(|t| t.settings == xs).collect();
        if terms.is_empty() {
            continue;
        }
        let block = p.block(&xs);
        let mut shifts = vec![0usize; n - 1];
        loop {
            let shift_sum: usize = shifts.iter().sum();
            for (o_index, &prob) in block.iter().enumerate() {
                let o = unflatten(o_index, &outcome_radices);
                let messages_sum: usize = (0..n - 1).map(|i| (o[i] + shifts[i]) % d).sum();
                let g = (o[n - 1] + messages_sum) % d;
                for t in &terms {
                    if g == (t.target + shift_sum) % d {
                        total += t.weight / norm * prob;
                    }
                }
            }
            if !advance(&mut shifts, d) {
                break;
            }
        }
    }
    Ok(total)
}

/// Best CCP score reachable classically with additive messages only, i.e.
/// with deterministic local functions `o_i(x_i)` fed into the additive
/// protocol. Equals the functional's local bound.
pub fn additive_classical_optimum(f: &CorrelationFunctional) -> Result<f64> {
    let d = f.outcomes();
    let total = f
        .settings()
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(checked_pow(d, s)));
    guard("additive local strategies", total, crate::bell::LHV_ENUMERATION_LIMIT)?;
    let width: usize = f.settings().iter().sum();
    let mut flat = vec![0usize; width];
    let mut best = f64::NEG_INFINITY;
    loop {
        let mut responses = Vec::with_capacity(f.parties());
        let mut offset = 0;
        for &s in f.settings() {
            responses.push(flat[offset..offset + s].to_vec());
            offset += s;
        }
        let p = NPartyBehavior::deterministic(d, &responses)?;
        best = best.max(additive_multiparty_score(f, &p)?);
        if !advance(&mut flat, d) {
            break;
        }
    }
    Ok(best)
}
