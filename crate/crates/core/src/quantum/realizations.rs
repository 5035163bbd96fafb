//! Explicit quantum realizations: the optimal CHSH configuration, the
//! hexagon singlet configuration that
//! saturates the qubit I3322 maximum, the noisy candidate state that violates
//! I3322 but not CHSH, and the optimal two-qutrit CGLMP configuration.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::Complex;

use super::{born_behavior, Behavior, DensityMatrix, MeasurementSet};
use crate::bell::cglmp_correlation;
use crate::Result;

/// A shared state together with both parties' measurements.
#[derive(Clone, Debug)]
pub struct Realization {
    pub state: DensityMatrix,
    pub alice: MeasurementSet,
    pub bob: MeasurementSet,
}

impl Realization {
    pub fn behavior(&self) -> Result<Behavior> {
        born_behavior(&self.state, &self.alice, &self.bob)
    }
}

fn singlet() -> Result<DensityMatrix> {
    DensityMatrix::pure_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

/// Singlet with xz-plane measurements whose Bloch vectors (with antipodes)
/// form a hexagon on each side.
pub fn hexagon_realization() -> Result<Realization> {
    let h = 3f64.sqrt() / 2.0;
    let alice = [[0.0, 0.0, 1.0], [h, 0.0, 0.5], [h, 0.0, -0.5]];
    let bob = [[-h, 0.0, -0.5], [0.0, 0.0, -1.0], [h, 0.0, -0.5]];
    Ok(Realization {
        state: singlet()?,
        alice: MeasurementSet::qubit_projective(&alice)?,
        bob: MeasurementSet::qubit_projective(&bob)?,
    })
}

fn xz_bloch(angle: f64) -> [f64; 3] {
    [angle.sin(), 0.0, angle.cos()]
}

/// `|Φ⁺⟩` with Alice at xz-plane angles (0, π/2) and Bob at (π/4, −π/4):
/// `P(a ⊕ b = xy) = 1/2 + 1/(2√2)` for every setting pair.
pub fn chsh_realization() -> Result<Realization> {
    let q = PI / 4.0;
    Ok(Realization {
        state: DensityMatrix::pure_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])?,
        alice: MeasurementSet::qubit_projective(&[0.0, 2.0 * q].map(xz_bloch))?,
        bob: MeasurementSet::qubit_projective(&[q, -q].map(xz_bloch))?,
    })
}

/// `ρ = (17/20)|φ⟩⟨φ| + (3/20)|01⟩⟨01|` with `|φ⟩ = (2|00⟩ + |11⟩)/√5`, and
/// xz-plane measurements at angles (η, −η, −π/2) for Alice and (−χ, χ, π/2)
/// for Bob, where `η = arccos √(7/8)` and `χ = arccos √(2/3)`.
pub fn candidate_realization() -> Result<Realization> {
    let s5 = 5f64.sqrt();
    let phi = DensityMatrix::pure_real(&[2.0 / s5, 0.0, 0.0, 1.0 / s5])?;
    let e01 = DensityMatrix::pure_real(&[0.0, 1.0, 0.0, 0.0])?;
    let state = DensityMatrix::mixture(&[(17.0 / 20.0, &phi), (3.0 / 20.0, &e01)])?;
    let eta = (7.0f64 / 8.0).sqrt().acos();
    let chi = (2.0f64 / 3.0).sqrt().acos();
    let alice = [eta, -eta, -PI / 2.0].map(xz_bloch);
    let bob = [-chi, chi, PI / 2.0].map(xz_bloch);
    Ok(Realization {
        state,
        alice: MeasurementSet::qubit_projective(&alice)?,
        bob: MeasurementSet::qubit_projective(&bob)?,
    })
}

fn fourier_ket(d: usize, label: usize, phase: f64, sign: f64) -> Vec<Complex<f64>> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|j| {
            let theta = sign * 2.0 * PI / d as f64 * j as f64 * (label as f64 + phase);
            Complex::from_polar(norm, theta)
        })
        .collect()
}

/// Two-qudit CGLMP configuration with Schmidt profile `(1, γ, …, γ, 1)`
/// (normalized). Alice measures Fourier bases with phases {0, 1/2}; Bob
/// measures conjugate Fourier bases with phases {1/4, −1/4} and reports
/// `b = −l mod d` for basis label `l`, which matches the `a + b` target form.
pub fn cglmp_realization(d: usize, gamma: f64) -> Result<Realization> {
    let mut amps = vec![gamma; d];
    amps[0] = 1.0;
    amps[d - 1] = 1.0;
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut ket = vec![0.0; d * d];
    for (j, a) in amps.iter().enumerate() {
        ket[j * d + j] = a / norm;
    }
    let alice: Vec<Vec<_>> = [0.0, 0.5]
        .iter()
        .map(|&alpha| (0..d).map(|k| fourier_ket(d, k, alpha, 1.0)).collect())
        .collect();
    let bob: Vec<Vec<_>> = [0.25, -0.25]
        .iter()
        .map(|&beta| {
            (0..d)
                .map(|b| fourier_ket(d, (d - b) % d, beta, -1.0))
                .collect()
        })
        .collect();
    Ok(Realization {
        state: DensityMatrix::pure_real(&ket)?,
        alice: MeasurementSet::from_bases(&alice)?,
        bob: MeasurementSet::from_bases(&bob)?,
    })
}

/// Two-qutrit realization maximizing the CGLMP functional: the inner Schmidt
/// coefficient is found by golden-section search.
pub fn cglmp_optimal_realization() -> Result<Realization> {
    let functional = cglmp_correlation(3)?.to_bell_functional()?;
    let value = |gamma: f64| -> Result<f64> {
        functional.evaluate(&cglmp_realization(3, gamma)?.behavior()?)
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 2.0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (value(c)?, value(d)?);
    while hi - lo > 1e-9 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = value(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = value(d)?;
        }
    }
    cglmp_realization(3, 0.5 * (lo + hi))
}
