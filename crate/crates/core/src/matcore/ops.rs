use num_complex::Complex64;

use super::linalg::{hermitian_eigenvalues, hermitian_trace_norm};
use super::matrix::{ComplexMatrix, ZERO};
use super::state::{DensityMatrix, FactorShape, Ket};
use crate::error::{check_dim, Error, Result};

/// Kronecker product, `a` as the most significant factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Partial trace of an arbitrary square matrix (not necessarily normalised).
///
/// The result is ordered by `keep`, so `keep = [1, 0]` also swaps the two
/// surviving factors.
pub fn partial_trace_matrix(m: &ComplexMatrix, shape: &FactorShape, keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    check_dim(shape.total(), m.rows())?;
    let dims = shape.dims();
    let nf = dims.len();
    let mut seen = vec![false; nf];
    for &k in keep {
        if k >= nf || seen[k] {
            return Err(Error::InvalidArgument(format!(
                "keep set {keep:?} is not a set of factor indices below {nf}"
            )));
        }
        seen[k] = true;
    }
    let traced: Vec<usize> = (0..nf).filter(|&f| !seen[f]).collect();

    // stride of each factor in the full row-major index
    let mut strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let total: usize = factors.iter().map(|&f| dims[f]).product();
        (0..total)
            .map(|mut idx| {
                let mut off = 0;
                for &f in factors.iter().rev() {
                    off += (idx % dims[f]) * strides[f];
                    idx /= dims[f];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(keep);
    let traced_off = offsets(&traced);

    let dk = kept_off.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (a, &oa) in kept_off.iter().enumerate() {
        for (b, &ob) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m[(oa + t, ob + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, shape: &FactorShape, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep set must not be empty".into()));
    }
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(rho.matrix(), shape, keep)?))
}

/// ½‖a − b‖₁, computed from the spectrum of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let diff = a.matrix().sub(b.matrix())?;
    Ok((0.5 * hermitian_trace_norm(&diff)?).clamp(0.0, 1.0))
}

/// −Σ λ log₂ λ over a spectrum; negative noise is clamped to zero.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| l.max(0.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&hermitian_eigenvalues(rho.matrix())?))
}

/// Largest deviation of the Gram matrix of `states` from the identity.
pub fn gram_orthonormality(states: &[Ket]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        worst = worst.max((a.inner(a)? - Complex64::new(1.0, 0.0)).norm());
        for b in &states[i + 1..] {
            worst = worst.max(a.inner(b)?.norm());
        }
    }
    Ok(worst)
}

/// Fidelity ⟨ψ|ρ|ψ⟩ of a mixed state with a pure target.
pub fn fidelity_pure(target: &Ket, rho: &DensityMatrix) -> Result<f64> {
    rho.expectation(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ONE;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn singlet() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(vec![ZERO, c(s), c(-s), ZERO]).unwrap()
    }

    #[test]
    fn tensor_identity_and_basis() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        assert_eq!(tensor(&p0, &p1), ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn zz_on_01_has_eigenvalue_minus_one() {
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let zz = tensor(&z, &z);
        let ket01 = Ket::basis(4, 1);
        let out = zz.matvec(ket01.amplitudes()).unwrap();
        assert_eq!(out, vec![ZERO, c(-1.0), ZERO, ZERO]);
    }

    #[test]
    fn singlet_reduces_to_maximally_mixed() {
        let rho = singlet().projector();
        let red = partial_trace(&rho, &FactorShape::qubits(2), &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn shift_state_reduction_3x2() {
        // (1/√2) Σ_k e^{2πikm/2} |k+l mod 3⟩|k⟩ with l = 1, m = 1
        let (da, db) = (3usize, 2usize);
        let mut amps = vec![ZERO; da * db];
        for k in 0..db {
            let phase = Complex64::from_polar(1.0, std::f64::consts::PI * k as f64);
            amps[((k + 1) % da) * db + k] = phase / (db as f64).sqrt();
        }
        let rho = Ket::new(amps).unwrap().projector();
        let shape = FactorShape::new(vec![da, db]).unwrap();
        let rb = partial_trace(&rho, &shape, &[1]).unwrap();
        assert!(rb.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_shape() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            partial_trace(&rho, &FactorShape::new(vec![3, 2]).unwrap(), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(partial_trace(&rho, &FactorShape::qubits(2), &[0, 0]).is_err());
    }

    #[test]
    fn keep_order_permutes_factors() {
        let a = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.25, 0.75])).unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.1, 0.2, 0.7])).unwrap();
        let ab = a.kron(&b);
        let shape = FactorShape::new(vec![2, 3]).unwrap();
        let ba = partial_trace(&ab, &shape, &[1, 0]).unwrap();
        assert!(ba.matrix().max_abs_diff(b.kron(&a).matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        let p0 = Ket::basis(2, 0).projector();
        let p1 = Ket::basis(2, 1).projector();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(trace_distance(&p0, &p0).unwrap().abs() < 1e-15);
        assert!((trace_distance(&p0, &p1).unwrap() - 1.0).abs() < 1e-14);
        assert!((trace_distance(&mixed, &p0).unwrap() - 0.5).abs() < 1e-14);
        assert!(trace_distance(&p0, &DensityMatrix::maximally_mixed(4)).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&singlet().projector()).unwrap().abs() < 1e-10);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(8)).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gram_examples() {
        let basis: Vec<Ket> = (0..4).map(|i| Ket::basis(4, i)).collect();
        assert_eq!(gram_orthonormality(&basis).unwrap(), 0.0);
        let plus = Ket::normalized(vec![ONE, ONE]).unwrap();
        let g = gram_orthonormality(&[Ket::basis(2, 0), plus]).unwrap();
        assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
