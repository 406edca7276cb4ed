//! Hermitian eigendecomposition, the only spectral primitive the crate needs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    // Symmetrise so the solver only ever sees an exactly Hermitian input.
    let n = m.rows();
    DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare(m.rows(), m.cols()))
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    require_square(m)?;
    if m.rows() == 1 {
        return Ok(vec![m[(0, 0)].re]);
    }
    let mut vals: Vec<f64> = to_nalgebra(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Eigenvalues (ascending) and matching unit eigenvectors stored as columns.
pub fn hermitian_eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_square(m)?;
    let n = m.rows();
    let eig = to_nalgebra(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((vals, vecs))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_y_spectrum() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let (vals, vecs) = hermitian_eigh(&y).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let v = vecs.column(1);
        let yv = y.matvec(&v).unwrap();
        for (a, b) in yv.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
