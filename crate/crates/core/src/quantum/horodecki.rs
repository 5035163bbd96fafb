use nalgebra::Matrix3;

use super::linalg::{kron, pauli, trace_product};
use super::DensityMatrix;
use crate::{Error, Result};

/// `T_ij = Tr[ρ σ_i⊗σ_j]` for a two-qubit state.
pub fn pauli_correlation_matrix(rho: &DensityMatrix) -> Result<Matrix3<f64>> {
    if rho.dim() != 4 {
        return Err(Error::dims(format!(
            "correlation matrix needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    Ok(Matrix3::from_fn(|i, j| {
        trace_product(&kron(&pauli(i), &pauli(j)), rho.matrix())
    }))
}

/// Horodecki quantity `M(ρ)`: sum of the two largest eigenvalues of `TᵀT`.
/// The state can violate CHSH iff `M(ρ) > 1`.
pub fn horodecki_chsh(rho: &DensityMatrix) -> Result<f64> {
    let t = pauli_correlation_matrix(rho)?;
    let mut ev: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev[0] + ev[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_and_mixed_extremes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = DensityMatrix::pure_real(&[0.0, h, -h, 0.0]).unwrap();
        let t = pauli_correlation_matrix(&singlet).unwrap();
        assert!((t + Matrix3::identity()).amax() < 1e-12);
        assert!((horodecki_chsh(&singlet).unwrap() - 2.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(horodecki_chsh(&mixed).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_qutrit_pair() {
        let rho = DensityMatrix::maximally_mixed(9).unwrap();
        assert!(horodecki_chsh(&rho).is_err());
    }
}
