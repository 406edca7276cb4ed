use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{check_dim, Error, Result};

/// Absolute tolerance for exact constructions.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A normalised pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, DEFAULT_TOL)
    }

    pub fn with_tolerance(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty ket".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("ket norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !n.is_finite() || n <= 1e-300 {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// Haar-random pure state from a normalised complex Gaussian vector.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(k) = Self::normalized(v) {
                return k;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket { amplitudes }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps the output of a map already known to preserve density matrices.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Random mixed state `G G† / Tr(G G†)` with a square Ginibre `G`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let gg = g.matmul(&g.adjoint()).expect("square");
        let tr = gg.trace().re;
        let mut m = gg.scale_real(1.0 / tr);
        // exact Hermiticity
        let n = m.rows();
        for i in 0..n {
            for j in i..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self::from_trusted(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(self.matrix.kron(&other.matrix))
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn expectation(&self, ket: &Ket) -> Result<f64> {
        let rv = self.matrix.matvec(ket.amplitudes())?;
        Ok(ket.amplitudes().iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re)
    }
}

/// Dimensions of the tensor factors of a composite space, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorShape {
    dims: Vec<usize>,
}

impl FactorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "factor dimensions must be positive, got {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }
}
