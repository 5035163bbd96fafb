use nalgebra::{Complex, DMatrix};

pub type CMatrix = DMatrix<Complex<f64>>;

/// Largest Hilbert-space dimension handled by the dense routines.
pub const MAX_DIM: usize = 9;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Pauli matrices σ_x, σ_y, σ_z for `axis` 0, 1, 2.
pub fn pauli(axis: usize) -> CMatrix {
    let (o, l, i) = (
        Complex::new(0.0, 0.0),
        Complex::new(1.0, 0.0),
        Complex::new(0.0, 1.0),
    );
    match axis {
        0 => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        1 => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        2 => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => panic!("pauli axis {axis} out of range"),
    }
}

/// Re Tr[A·B] without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn hermiticity_gap(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut gap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            gap = gap.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    gap
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (pauli(0), pauli(1), pauli(2));
        let i = Complex::new(0.0, 1.0);
        assert!((&x * &y - z.map(|e| e * i)).norm() < 1e-15);
        for s in [&x, &y, &z] {
            assert!((s * s - identity(2)).norm() < 1e-15);
            assert_eq!(hermiticity_gap(s), 0.0);
        }
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = kron(&pauli(0), &pauli(2));
        let b = kron(&pauli(1), &identity(2)) + kron(&pauli(0), &pauli(2));
        assert!((trace_product(&a, &b) - (&a * &b).trace().re).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let ev = hermitian_eigenvalues(&pauli(1));
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }
}
