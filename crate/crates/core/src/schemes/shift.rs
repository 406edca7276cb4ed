use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{Ket, ZERO};

/// `e^{2πi·num/den}`.
pub(crate) fn root_of_unity(num: usize, den: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (num % den) as f64 / den as f64)
}

/// Orthogonal states on `A ⊗ B` (A most significant) that all look the same
/// once `A` is depolarized.
///
/// For `d_A ≥ d_B` this returns the `d_A·d_B` states
/// `(1/√d_B) Σ_k e^{2πikm/d_B} |k+l mod d_A⟩|k⟩` ordered by `(l, m)`; their
/// common image is `(I/d_A) ⊗ (I/d_B)`. For `d_A < d_B` it returns `d_A²`
/// states supported on the first `d_A` vectors of `B`, with image
/// `(I/d_A) ⊗ σ_B`, `σ_B` the normalized projector onto those vectors.
pub fn cyclic_shift_states(d_a: usize, d_b: usize) -> Result<Vec<Ket>> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::InvalidArgument("factor dimensions must be positive".into()));
    }
    let k_range = d_a.min(d_b);
    let norm = 1.0 / (k_range as f64).sqrt();
    let mut out = Vec::with_capacity(d_a * k_range);
    for l in 0..d_a {
        for m in 0..k_range {
            let mut amps = vec![ZERO; d_a * d_b];
            for k in 0..k_range {
                amps[((k + l) % d_a) * d_b + k] = root_of_unity(k * m, k_range) * norm;
            }
            out.push(Ket::from_raw(amps));
        }
    }
    Ok(out)
}

/// Number of states `cyclic_shift_states` returns: `d_A · min(d_A, d_B)`.
pub fn cyclic_shift_count(d_a: usize, d_b: usize) -> usize {
    d_a * d_a.min(d_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{gram_orthonormality, ComplexMatrix, DensityMatrix};
    use crate::twirl::{depolarize_block, Side};

    fn common_image(d_a: usize, d_b: usize) -> Vec<ComplexMatrix> {
        cyclic_shift_states(d_a, d_b)
            .unwrap()
            .iter()
            .map(|s| depolarize_block(s.projector().matrix(), d_a, d_b, Side::R).unwrap())
            .collect()
    }

    #[test]
    fn two_by_two_bell_states() {
        let states = cyclic_shift_states(2, 2).unwrap();
        assert_eq!(states.len(), 4);
        assert!(gram_orthonormality(&states).unwrap() < 1e-12);
        let target = DensityMatrix::maximally_mixed(4).into_matrix();
        for img in common_image(2, 2) {
            assert!(img.max_abs_diff(&target).unwrap() < 1e-14);
        }
    }

    #[test]
    fn wide_a_factor() {
        let states = cyclic_shift_states(3, 2).unwrap();
        assert_eq!(states.len(), 6);
        assert!(gram_orthonormality(&states).unwrap() < 1e-12);
        let target = DensityMatrix::maximally_mixed(6).into_matrix();
        for img in common_image(3, 2) {
            assert!(img.max_abs_diff(&target).unwrap() < 1e-14);
        }
    }

    #[test]
    fn narrow_a_factor_uses_partial_identity_on_b() {
        let states = cyclic_shift_states(2, 3).unwrap();
        assert_eq!(states.len(), 4);
        assert!(gram_orthonormality(&states).unwrap() < 1e-12);
        // σ_B = ½ on the first two basis vectors of B
        let sigma_b = ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0]);
        let target = ComplexMatrix::identity(2).scale_real(0.5).kron(&sigma_b);
        for img in common_image(2, 3) {
            assert!(img.max_abs_diff(&target).unwrap() < 1e-14);
        }
    }

    #[test]
    fn trivial_factors() {
        assert_eq!(cyclic_shift_states(1, 1).unwrap().len(), 1);
        assert_eq!(cyclic_shift_states(4, 1).unwrap().len(), 4);
        assert!(cyclic_shift_states(0, 2).is_err());
        assert_eq!(cyclic_shift_count(3, 5), 9);
    }
}
