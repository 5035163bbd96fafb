use nalgebra::Complex;

use super::linalg::{hermitian_eigenvalues, hermiticity_gap, identity, pauli, CMatrix, MAX_DIM};
use crate::{Error, Result};

const PSD_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-12;

/// One measurement per setting, each a list of POVM elements summing to the
/// identity.
#[derive(Clone, Debug)]
pub struct MeasurementSet {
    dim: usize,
    settings: usize,
    outcomes: usize,
    /// Indexed `setting * outcomes + outcome`.
    operators: Vec<CMatrix>,
}

impl MeasurementSet {
    pub fn new(
        dim: usize,
        settings: usize,
        outcomes: usize,
        operators: Vec<CMatrix>,
    ) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::dims(format!("local dimension {dim} outside 1..={MAX_DIM}")));
        }
        if settings == 0 || outcomes == 0 || operators.len() != settings * outcomes {
            return Err(Error::dims(format!(
                "expected {settings}×{outcomes} operators, got {}",
                operators.len()
            )));
        }
        for (k, op) in operators.iter().enumerate() {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::dims(format!("operator {k} is not {dim}×{dim}")));
            }
            if hermiticity_gap(op) > COMPLETENESS_TOL {
                return Err(Error::invalid(format!("operator {k} is not Hermitian")));
            }
            let min_ev = hermitian_eigenvalues(op)[0];
            if min_ev < -PSD_TOL {
                return Err(Error::invalid(format!(
                    "operator {k} is not positive (min eigenvalue {min_ev:e})"
                )));
            }
        }
        for s in 0..settings {
            let sum = operators[s * outcomes..(s + 1) * outcomes]
                .iter()
                .fold(CMatrix::zeros(dim, dim), |acc, op| acc + op);
            let err = (sum - identity(dim)).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            if err > COMPLETENESS_TOL {
                return Err(Error::invalid(format!(
                    "setting {s} does not sum to identity (error {err:e})"
                )));
            }
        }
        Ok(Self {
            dim,
            settings,
            outcomes,
            operators,
        })
    }

    /// Projective two-outcome qubit measurements, one per Bloch vector.
    pub fn qubit_projective(blochs: &[[f64; 3]]) -> Result<Self> {
        let mut ops = Vec::with_capacity(2 * blochs.len());
        for bloch in blochs {
            ops.push(qubit_projector(*bloch, 0)?);
            ops.push(qubit_projector(*bloch, 1)?);
        }
        Self::new(2, blochs.len(), 2, ops)
    }

    /// Rank-one projective measurements from orthonormal bases:
    /// `bases[setting][outcome]` is the ket assigned to that outcome.
    pub fn from_bases(bases: &[Vec<Vec<Complex<f64>>>]) -> Result<Self> {
        let settings = bases.len();
        let outcomes = bases.first().map_or(0, Vec::len);
        let dim = bases
            .first()
            .and_then(|b| b.first())
            .map_or(0, Vec::len);
        let mut ops = Vec::with_capacity(settings * outcomes);
        for basis in bases {
            if basis.len() != outcomes {
                return Err(Error::dims("bases differ in outcome count"));
            }
            for ket in basis {
                if ket.len() != dim {
                    return Err(Error::dims("basis vectors differ in dimension"));
                }
                ops.push(CMatrix::from_fn(dim, dim, |i, j| ket[i] * ket[j].conj()));
            }
        }
        Self::new(dim, settings, outcomes, ops)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn operator(&self, setting: usize, outcome: usize) -> &CMatrix {
        &self.operators[setting * self.outcomes + outcome]
    }
}

/// `(𝟙 + (−1)^outcome · bloch·σ⃗) / 2`.
pub fn qubit_projector(bloch: [f64; 3], outcome: usize) -> Result<CMatrix> {
    let norm = bloch.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::invalid(format!("Bloch vector length {norm} exceeds 1")));
    }
    if outcome > 1 {
        return Err(Error::invalid(format!("qubit outcome {outcome} is not a bit")));
    }
    let sign = if outcome == 0 { 1.0 } else { -1.0 };
    let mut op = identity(2);
    for (axis, &c) in bloch.iter().enumerate() {
        op += pauli(axis).map(|e| e * (sign * c));
    }
    Ok(op.map(|e| e * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(m: &CMatrix, entries: [[f64; 2]; 2]) -> bool {
        (0..2).all(|i| (0..2).all(|j| (m[(i, j)] - Complex::new(entries[i][j], 0.0)).norm() < 1e-15))
    }

    #[test]
    fn computational_basis_projectors() {
        assert!(close(&qubit_projector([0.0, 0.0, 1.0], 0).unwrap(), [[1.0, 0.0], [0.0, 0.0]]));
        assert!(close(&qubit_projector([0.0, 0.0, 1.0], 1).unwrap(), [[0.0, 0.0], [0.0, 1.0]]));
    }

    #[test]
    fn hexagon_vector_projector_is_rank_one() {
        let s3 = 3f64.sqrt();
        let b1 = [-s3 / 2.0, 0.0, -0.5];
        let p = qubit_projector(b1, 0).unwrap();
        // Diagonal (1 − 1/2)/2, (1 + 1/2)/2.
        assert!((p[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((p[(1, 1)].re - 0.75).abs() < 1e-15);
        // Independent route: eigenvalues of the 2×2 real symmetric matrix
        // from the trace/determinant formula.
        let (a, d, c) = (p[(0, 0)].re, p[(1, 1)].re, p[(0, 1)].re);
        let tr = a + d;
        let det = a * d - c * c;
        let disc = (tr * tr / 4.0 - det).sqrt();
        assert!((tr / 2.0 - disc).abs() < 1e-12);
        assert!((tr / 2.0 + disc - 1.0).abs() < 1e-12);
        let ev = hermitian_eigenvalues(&p);
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_long_bloch_vector() {
        assert!(qubit_projector([0.0, 0.8, 0.8], 0).is_err());
        assert!(qubit_projector([0.0, 0.0, 1.0 + 1e-13], 0).is_ok());
    }

    #[test]
    fn rejects_incomplete_measurement() {
        let p0 = qubit_projector([0.0, 0.0, 1.0], 0).unwrap();
        let err = MeasurementSet::new(2, 1, 2, vec![p0.clone(), p0]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rejects_wrong_operator_count() {
        let p0 = qubit_projector([0.0, 0.0, 1.0], 0).unwrap();
        assert!(matches!(
            MeasurementSet::new(2, 2, 2, vec![p0]),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
