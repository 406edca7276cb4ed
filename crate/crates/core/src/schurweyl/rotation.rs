use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Ket};

/// An SU(2) element, kept in canonical form as its 2×2 matrix.
///
/// Computational state `|0⟩` is spin up (`m = +½`). A rotation by angle `θ`
/// about unit axis `n` is `exp(−iθ n·σ/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    // [[a, b], [c, d]]
    m: [Complex64; 4],
}

const SU2_TOL: f64 = 1e-12;

impl Rotation {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self { m: [one, zero, zero, one] }
    }

    pub fn axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !len.is_finite() || len <= 0.0 || !angle.is_finite() {
            return Err(Error::InvalidArgument(format!("bad rotation axis {axis:?} / angle {angle}")));
        }
        let [nx, ny, nz] = axis.map(|x| x / len);
        let (s, c) = (angle / 2.0).sin_cos();
        Ok(Self::from_quaternion(c, nx * s, ny * s, nz * s))
    }

    /// `Rz(α) · Ry(β) · Rz(γ)`.
    pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let rz = |t: f64| Self::axis_angle([0.0, 0.0, 1.0], t);
        let ry = Self::axis_angle([0.0, 1.0, 0.0], beta)?;
        Ok(rz(alpha)?.then(&ry).then(&rz(gamma)?))
    }

    /// Unit quaternion `(w, x, y, z)` ↦ `w I − i (x σx + y σy + z σz)`.
    fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self {
            m: [
                Complex64::new(w, -z),
                Complex64::new(-y, -x),
                Complex64::new(y, -x),
                Complex64::new(w, z),
            ],
        }
    }

    /// Draws from the invariant (Haar) measure on SU(2): a uniformly random unit
    /// quaternion from a normalised 4-d Gaussian.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let len = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 1e-12 {
                return Self::from_quaternion(q[0] / len, q[1] / len, q[2] / len, q[3] / len);
            }
        }
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::InvalidArgument("rotation matrix must be 2x2".into()));
        }
        let r = Self { m: [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]] };
        let det = r.m[0] * r.m[3] - r.m[1] * r.m[2];
        if !m.is_unitary(SU2_TOL) || (det - 1.0).norm() > SU2_TOL {
            return Err(Error::InvalidArgument("matrix is not special unitary".into()));
        }
        Ok(r)
    }

    /// Composition `self · other` (apply `other` first).
    pub fn then(&self, other: &Rotation) -> Rotation {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Rotation { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(2, 2, self.m.to_vec()).expect("2x2")
    }

    pub(crate) fn entries(&self) -> [Complex64; 4] {
        self.m
    }
}

/// `R^{⊗N}` as a dense `2^N × 2^N` matrix.
pub fn collective_rotation(rot: &Rotation, n_qubits: usize) -> ComplexMatrix {
    let single = rot.matrix();
    let mut out = ComplexMatrix::identity(1);
    for _ in 0..n_qubits {
        out = out.kron(&single);
    }
    out
}

/// Applies `R^{⊗N}` to an amplitude vector in `O(N 2^N)`.
pub fn apply_collective(rot: &Rotation, n_qubits: usize, amps: &mut [Complex64]) {
    debug_assert_eq!(amps.len(), 1 << n_qubits);
    let [a, b, c, d] = rot.entries();
    for q in 0..n_qubits {
        let bit = 1usize << (n_qubits - 1 - q);
        for i in 0..amps.len() {
            if i & bit == 0 {
                let (x0, x1) = (amps[i], amps[i | bit]);
                amps[i] = a * x0 + b * x1;
                amps[i | bit] = c * x0 + d * x1;
            }
        }
    }
}

pub fn rotate_ket(rot: &Rotation, n_qubits: usize, ket: &Ket) -> Result<Ket> {
    crate::error::check_dim(1 << n_qubits, ket.dim())?;
    let mut amps = ket.amplitudes().to_vec();
    apply_collective(rot, n_qubits, &mut amps);
    Ok(Ket::from_raw(amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn z_rotation_by_pi() {
        let r = Rotation::axis_angle([0.0, 0.0, 1.0], PI).unwrap().matrix();
        assert!((r[(0, 0)] - Complex64::from_polar(1.0, -PI / 2.0)).norm() < 1e-15);
        assert!((r[(1, 1)] - Complex64::from_polar(1.0, PI / 2.0)).norm() < 1e-15);
        assert!(r[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn constructions_are_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = Rotation::haar_random(&mut rng);
            assert!(Rotation::from_matrix(&h.matrix()).is_ok());
        }
        let e = Rotation::euler_zyz(0.3, 1.2, -2.0).unwrap();
        assert!(Rotation::from_matrix(&e.matrix()).is_ok());
        assert!(Rotation::from_matrix(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn euler_about_z_only_matches_axis_angle() {
        let e = Rotation::euler_zyz(0.4, 0.0, 0.5).unwrap();
        let a = Rotation::axis_angle([0.0, 0.0, 2.0], 0.9).unwrap();
        assert!(e.matrix().max_abs_diff(&a.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn identity_power_is_identity() {
        assert_eq!(collective_rotation(&Rotation::identity(), 3), ComplexMatrix::identity(8));
    }

    #[test]
    fn fast_application_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = Rotation::haar_random(&mut rng);
        let ket = Ket::random(8, &mut rng);
        let dense = collective_rotation(&r, 3).matvec(ket.amplitudes()).unwrap();
        let fast = rotate_ket(&r, 3, &ket).unwrap();
        for (x, y) in dense.iter().zip(fast.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
