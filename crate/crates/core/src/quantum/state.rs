use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::linalg::{hermitian_eigenvalues, hermiticity_gap, CMatrix, MAX_DIM};
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || matrix.ncols() != dim {
            return Err(Error::dims(format!(
                "density matrix must be square, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if dim > MAX_DIM * MAX_DIM {
            return Err(Error::dims(format!("dimension {dim} exceeds {}", MAX_DIM * MAX_DIM)));
        }
        let gap = hermiticity_gap(&matrix);
        if gap > HERMITIAN_TOL {
            return Err(Error::invalid(format!("state is not Hermitian (gap {gap:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::invalid(format!("state trace is {trace}, expected 1")));
        }
        let min_ev = hermitian_eigenvalues(&matrix)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::invalid(format!(
                "state is not positive semidefinite (min eigenvalue {min_ev:e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// |ψ⟩⟨ψ| for a ket given in the computational basis. The ket is not
    /// renormalized.
    pub fn pure(ket: &[Complex<f64>]) -> Result<Self> {
        let n = ket.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj()))
    }

    pub fn pure_real(ket: &[f64]) -> Result<Self> {
        let ket: Vec<_> = ket.iter().map(|&a| Complex::new(a, 0.0)).collect();
        Self::pure(&ket)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim, dim) / Complex::new(dim as f64, 0.0))
    }

    /// Σ w_i ρ_i. Weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::invalid("empty mixture"))?;
        let dim = first.1.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::dims("mixture components differ in dimension"));
            }
            if *w < 0.0 {
                return Err(Error::invalid(format!("negative mixture weight {w}")));
            }
            acc += rho.matrix.map(|e| e * *w);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// U ρ U†, re-validated.
    pub fn conjugate(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::dims("unitary does not match state dimension"));
        }
        let mut m = unitary * &self.matrix * unitary.adjoint();
        // Symmetrize away round-off so the Hermitian check stays tight.
        m = (&m + m.adjoint()).map(|e| e * 0.5);
        Self::new(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        MatrixRepr {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| self.matrix[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| self.matrix[(i, j)].im).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let n = repr.dim;
        let ok = repr.re.len() == n
            && repr.im.len() == n
            && repr.re.iter().chain(&repr.im).all(|row| row.len() == n);
        if !ok {
            return Err(serde::de::Error::custom("matrix rows do not match dim"));
        }
        let m = CMatrix::from_fn(n, n, |i, j| Complex::new(repr.re[i][j], repr.im[i][j]));
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
