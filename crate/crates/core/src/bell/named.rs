//! The inequalities used throughout: CHSH in game form, CGLMP for any `d`,
//! I3322 and a three-party Mermin (GHZ game) functional.

use super::{BellFunctional, CollinsGisinForm, CorrelationFunctional, CorrelationTerm};
use crate::{Error, Result};

/// CHSH as the game `¼ Σ_{x,y} P(a + b = xy mod 2)`; local bound 3/4.
pub fn chsh_functional() -> Result<CorrelationFunctional> {
    let mut terms = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            terms.push(CorrelationTerm {
                settings: vec![x, y],
                r: 0,
                weight: 0.25,
                target: (x * y) % 2,
            });
        }
    }
    CorrelationFunctional::new(2, vec![2, 2], terms)
}

/// CGLMP with `d` outcomes in sum form, normalized by ¼:
/// `¼ Σ_{x,y} Σ_k (1 − 2k/(d−1)) [P(a+b = −xy − kσ) − P(a+b = −xy + (k+1)σ)]`
/// with `σ = (−1)^{x+y}` and `k < ⌊d/2⌋`. Local bound 1/2.
pub fn cglmp_correlation(d: usize) -> Result<CorrelationFunctional> {
    if d < 2 {
        return Err(Error::invalid("CGLMP needs d ≥ 2"));
    }
    let di = d as i64;
    let wrap = |v: i64| v.rem_euclid(di) as usize;
    let mut terms = Vec::new();
    for x in 0..2i64 {
        for y in 0..2i64 {
            let sigma = if (x + y) % 2 == 0 { 1 } else { -1 };
            let base = -x * y;
            for k in 0..(d / 2) {
                let w = 0.25 * (1.0 - 2.0 * k as f64 / (d as f64 - 1.0));
                let ki = k as i64;
                let settings = vec![x as usize, y as usize];
                terms.push(CorrelationTerm {
                    settings: settings.clone(),
                    r: 2 * k,
                    weight: w,
                    target: wrap(base - ki * sigma),
                });
                terms.push(CorrelationTerm {
                    settings,
                    r: 2 * k + 1,
                    weight: -w,
                    target: wrap(base + (ki + 1) * sigma),
                });
            }
        }
    }
    CorrelationFunctional::new(d, vec![2, 2], terms)
}

/// Three-outcome CGLMP as a general two-party functional.
pub fn cglmp3_functional() -> Result<BellFunctional> {
    cglmp_correlation(3)?.to_bell_functional()
}

/// Four-outcome CGLMP (weights ±¼ and ±1/12) in correlation form.
pub fn cglmp4_functional() -> Result<CorrelationFunctional> {
    cglmp_correlation(4)
}

/// `I = −P_A(0|0) − 2P_B(0|0) − P_B(0|1) + Σ T_{xy} P(0,0|x,y)` with
/// `T = [[1,1,1],[1,1,−1],[1,−1,0]]`.
pub fn i3322_form() -> CollinsGisinForm {
    CollinsGisinForm {
        marginal_a: vec![-1.0, 0.0, 0.0],
        marginal_b: vec![-2.0, -1.0, 0.0],
        joint: vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, 1.0, -1.0],
            vec![1.0, -1.0, 0.0],
        ],
    }
}

/// I3322 with marginals folded into joint coefficients. Local bound 0.
pub fn i3322_functional() -> Result<BellFunctional> {
    i3322_form().to_bell_functional()
}

/// GHZ/Mermin game on three parties: win when `a+b+c ≡ 0` on settings 000
/// and `≡ 1` on 011, 101, 110, each weighted ¼. Local bound 3/4.
pub fn mermin_functional() -> Result<CorrelationFunctional> {
    let cases = [([0, 0, 0], 0), ([0, 1, 1], 1), ([1, 0, 1], 1), ([1, 1, 0], 1)];
    let terms = cases
        .iter()
        .map(|(xs, f)| CorrelationTerm {
            settings: xs.to_vec(),
            r: 0,
            weight: 0.25,
            target: *f,
        })
        .collect();
    CorrelationFunctional::new(2, vec![2, 2, 2], terms)
}
