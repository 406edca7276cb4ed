//! Schur–Weyl decomposition of `(C^2)^{⊗N}`, collective SU(2) rotations and
//! qubit permutations.
//!
//! Qubits are coupled left to right, `((q0 ⊗ q1) ⊗ q2) …`, with
//! Condon–Shortley phases, so every block carries the same irrep matrices
//! on its rotation factor and the multiplicity factor is labelled by
//! coupling paths.

mod counting;
mod permutation;
mod rotation;
mod transform;

pub use counting::{
    bratteli_path_count, bratteli_paths, dim_p, dim_r, format_two_j, irrep_labels, parse_two_j, IrrepLabel,
};
pub use permutation::{permutation_operator, permute_density, permute_ket, permute_matrix, Permutation};
pub use rotation::{apply_collective, collective_rotation, rotate_ket, Rotation};
pub use transform::{
    build_schur_transform, build_schur_transform_with_limit, BlockHeader, IrrepBlock, SchurHeader, SchurTransform,
};

/// Default qubit cap (dimension 1024).
pub const DEFAULT_MAX_QUBITS: usize = 10;

/// Environment variable overriding the qubit cap.
pub const MAX_QUBITS_ENV: &str = "RFTWIRL_MAX_N";

/// The qubit cap: `RFTWIRL_MAX_N` if set to a positive integer, else 10.
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_QUBITS)
}
