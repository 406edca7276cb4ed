//! Dense complex linear algebra for states and operators.
//!
//! Index convention: the leftmost tensor factor (qubit 0) is the most
//! significant digit of a computational-basis index.

pub mod io;
mod linalg;
mod matrix;
mod ops;
mod state;

pub use linalg::{hermitian_eigenvalues, hermitian_eigh, hermitian_trace_norm};
pub use matrix::{ComplexMatrix, ONE, ZERO};
pub use ops::{
    entropy_of_spectrum, fidelity_pure, gram_orthonormality, partial_trace, partial_trace_matrix, tensor,
    trace_distance, von_neumann_entropy,
};
pub use state::{DensityMatrix, FactorShape, Ket, DEFAULT_TOL};
