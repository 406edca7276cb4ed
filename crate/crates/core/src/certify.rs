//! Numerical privacy and decodability verdicts for schemes and subsystems.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::matcore::{
    gram_orthonormality, trace_distance, von_neumann_entropy, ComplexMatrix, DensityMatrix, Ket,
};
use crate::schemes::{quantum_capacity_dim, quantum_decode, message_bound, ClassicalScheme, QuantumScheme, Scheme};
use crate::schurweyl::{IrrepBlock, SchurTransform};
use crate::twirl::{sample_rng, Side, SrfKind, Superop, SuperopKind, TwirlImage};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_HOLEVO_TOL: f64 = 1e-9;
pub const DEFAULT_N_RANDOM: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub holevo_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, holevo_tol: DEFAULT_HOLEVO_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub scheme_id: String,
    pub scheme_kind: String,
    pub srf: SrfKind,
    pub n_qubits: usize,
    /// Number of signal states, or the logical dimension of a quantum code.
    pub n_states: usize,
    /// Gram-matrix deviation from the identity (classical) or `‖V†V − I‖_max` (quantum).
    pub orthogonality_defect: f64,
    /// Largest pairwise trace distance between eavesdropper images.
    pub privacy_defect: f64,
    /// Upper bound on the largest trace distance from an image to the claimed `ρ₀`.
    pub rho0_residual: f64,
    pub holevo_bits: f64,
    pub bound_used: usize,
    pub within_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_decode_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_random: Option<usize>,
    pub tolerances: Tolerances,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CertReport {
    fn finish(mut self) -> Self {
        let tol = self.tolerances.tol;
        let mut failures = Vec::new();
        let mut check = |ok: bool, what: String| {
            if !ok {
                failures.push(what);
            }
        };
        check(self.orthogonality_defect <= tol, format!("orthogonality defect {:.3e} > {tol:.1e}", self.orthogonality_defect));
        check(self.privacy_defect <= tol, format!("privacy defect {:.3e} > {tol:.1e}", self.privacy_defect));
        check(self.rho0_residual <= tol, format!("rho0 residual {:.3e} > {tol:.1e}", self.rho0_residual));
        check(
            self.holevo_bits <= self.tolerances.holevo_tol,
            format!("Holevo quantity {:.3e} > {:.1e}", self.holevo_bits, self.tolerances.holevo_tol),
        );
        check(self.within_bound, format!("{} states exceed the bound {}", self.n_states, self.bound_used));
        if let Some(f) = self.min_decode_fidelity {
            check(1.0 - f <= tol, format!("decode fidelity {f:.12} below 1"));
        }
        self.passed = failures.is_empty();
        self.failures = failures;
        self
    }
}

/// `S(Σ p_i ρ_i) − Σ p_i S(ρ_i)` in bits, clamped at zero.
pub fn holevo(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    let first = ensemble.first().ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > 1e-10 || ensemble.iter().any(|(p, _)| *p < 0.0) {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
    }
    let dim = first.1.dim();
    let mut mean = ComplexMatrix::zeros(dim, dim);
    let mut avg_entropy = 0.0;
    for (p, rho) in ensemble {
        check_dim(dim, rho.dim())?;
        mean = mean.add(&rho.matrix().scale_real(*p))?;
        avg_entropy += p * von_neumann_entropy(rho)?;
    }
    let mixed = von_neumann_entropy(&DensityMatrix::from_trusted(mean))?;
    Ok((mixed - avg_entropy).max(0.0))
}

/// Optimal probability of telling `a` from `b` when each is sent with probability ½.
pub fn helstrom_guess(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(0.5 + 0.5 * trace_distance(a, b)?)
}

/// Largest pairwise distance, uniform-ensemble Holevo quantity, and the
/// distance bound to `rho0` of a set of structured images.
fn image_statistics(
    images: &[TwirlImage],
    rho0: &DensityMatrix,
    kind: SrfKind,
    t: &SchurTransform,
) -> Result<(f64, f64, f64)> {
    let mut privacy: f64 = 0.0;
    for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            privacy = privacy.max(a.trace_distance(b)?);
        }
    }
    // D(img, ρ₀) ≤ D(img, T(ρ₀)) + D(T(ρ₀), ρ₀)
    let target = TwirlImage::of_density(kind, t, rho0)?;
    let off_fixed_point = trace_distance(&target.to_density(t)?, rho0)?;
    let mut residual: f64 = 0.0;
    for img in images {
        residual = residual.max(img.trace_distance(&target)?);
    }
    let w = vec![1.0 / images.len() as f64; images.len()];
    let mixture = TwirlImage::mixture(images, &w)?;
    let mut avg = 0.0;
    for img in images {
        avg += img.entropy(t)? / images.len() as f64;
    }
    let holevo_bits = (mixture.entropy(t)? - avg).max(0.0);
    Ok((privacy, holevo_bits, (residual + off_fixed_point).min(1.0)))
}

pub fn certify_classical(scheme: &ClassicalScheme, tol: Tolerances) -> Result<CertReport> {
    let t = SchurTransform::shared(scheme.n_qubits())?;
    let kind = scheme.srf();
    let images = scheme
        .states()
        .iter()
        .map(|s| TwirlImage::of_amplitudes(kind, &t, s.amplitudes()))
        .collect::<Result<Vec<_>>>()?;
    let (privacy, holevo_bits, residual) = image_statistics(&images, scheme.claimed_rho0(), kind, &t)?;
    let bound = message_bound(scheme.n_qubits(), kind)?;
    Ok(CertReport {
        scheme_id: scheme.id(),
        scheme_kind: "classical".into(),
        srf: kind,
        n_qubits: scheme.n_qubits(),
        n_states: scheme.len(),
        orthogonality_defect: gram_orthonormality(scheme.states())?,
        privacy_defect: privacy,
        rho0_residual: residual,
        holevo_bits,
        bound_used: bound,
        within_bound: scheme.len() <= bound,
        min_decode_fidelity: None,
        n_random: None,
        tolerances: tol,
        passed: false,
        failures: Vec::new(),
    }
    .finish())
}

/// Checks Bob's recovery and Eve's ignorance on `n_random` random logical
/// pure states drawn from stream `i` of `seed`.
pub fn certify_quantum(scheme: &QuantumScheme, n_random: usize, seed: u64, tol: Tolerances) -> Result<CertReport> {
    if n_random < 2 {
        return Err(Error::InvalidArgument("need at least 2 random states".into()));
    }
    let t = SchurTransform::shared(scheme.n_qubits())?;
    let kind = scheme.srf();
    let v = scheme.isometry();
    let isometry_defect = v.adjoint_matmul(v)?.max_abs_diff(&ComplexMatrix::identity(v.cols()))?;
    let mut images = Vec::with_capacity(n_random);
    let mut min_fidelity: f64 = 1.0;
    for i in 0..n_random {
        let phi = Ket::random(scheme.logical_dim(), &mut sample_rng(seed, i as u64));
        let encoded = scheme.encode(&phi)?;
        let decoded = quantum_decode(scheme, &encoded.projector())?;
        min_fidelity = min_fidelity.min(decoded.expectation(&phi)?);
        images.push(TwirlImage::of_amplitudes(kind, &t, encoded.amplitudes())?);
    }
    let (privacy, holevo_bits, residual) = image_statistics(&images, scheme.claimed_rho0(), kind, &t)?;
    let bound = quantum_capacity_dim(scheme.n_qubits(), kind)?;
    Ok(CertReport {
        scheme_id: scheme.id(),
        scheme_kind: "quantum".into(),
        srf: kind,
        n_qubits: scheme.n_qubits(),
        n_states: scheme.logical_dim(),
        orthogonality_defect: isometry_defect,
        privacy_defect: privacy,
        rho0_residual: residual,
        holevo_bits,
        bound_used: bound,
        within_bound: scheme.logical_dim() <= bound,
        min_decode_fidelity: Some(min_fidelity),
        n_random: Some(n_random),
        tolerances: tol,
        passed: false,
        failures: Vec::new(),
    }
    .finish())
}

pub fn certify_scheme(scheme: &Scheme, n_random: usize, seed: u64, tol: Tolerances) -> Result<CertReport> {
    match scheme {
        Scheme::Classical(c) => certify_classical(c, tol),
        Scheme::Quantum(q) => certify_quantum(q, n_random, seed, tol),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfullReport {
    pub two_j: u32,
    /// Dimension of the depolarized factor and of its untouched partner.
    pub d_full: usize,
    pub d_free: usize,
    pub n_checked: usize,
    /// Largest trace distance between an image and `(I/d_A) ⊗ ρ_B`.
    pub defect: f64,
    pub passed: bool,
}

/// Verifies that `superop` sends every product `ρ_A ⊗ ρ_B` on `block` to
/// `(I/d_A) ⊗ ρ_B`, where `A` is the factor the superoperator depolarizes.
///
/// Checks `n_random` random products and every product of basis states.
pub fn certify_dfull(block: &IrrepBlock, superop: &Superop, n_random: usize, seed: u64, tol: f64) -> Result<DfullReport> {
    let t = superop.transform();
    if t.block(block.two_j())? != block {
        return Err(Error::InvalidArgument("block does not belong to the superoperator's transform".into()));
    }
    // None: the whole block is depolarized
    let side = match superop.kind() {
        SuperopKind::Su2Twirl => Some(Side::R),
        SuperopKind::PermTwirl => Some(Side::P),
        SuperopKind::Both => None,
        SuperopKind::BlockDepolarize { two_j, side } => {
            if two_j != block.two_j() {
                return Err(Error::InvalidArgument(format!("superoperator acts on block 2j = {two_j}")));
            }
            Some(side)
        }
    };
    let (d_a, d_b) = match side {
        Some(Side::R) => (block.d_r, block.d_p),
        Some(Side::P) => (block.d_p, block.d_r),
        None => (block.dim(), 1),
    };
    let arrange = |a: &ComplexMatrix, b: &ComplexMatrix| match side {
        Some(Side::P) => b.kron(a),
        _ => a.kron(b),
    };
    let mut cases: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
    for i in 0..n_random {
        let mut rng = sample_rng(seed, i as u64);
        cases.push((DensityMatrix::random(d_a, &mut rng).into_matrix(), DensityMatrix::random(d_b, &mut rng).into_matrix()));
    }
    for a in 0..d_a {
        for b in 0..d_b {
            cases.push((Ket::basis(d_a, a).projector().into_matrix(), Ket::basis(d_b, b).projector().into_matrix()));
        }
    }
    let mixed_a = ComplexMatrix::identity(d_a).scale_real(1.0 / d_a as f64);
    let mut defect: f64 = 0.0;
    for (rho_a, rho_b) in &cases {
        let input = DensityMatrix::from_trusted(t.embed_block_operator(block, &arrange(rho_a, rho_b))?);
        let expected = DensityMatrix::from_trusted(t.embed_block_operator(block, &arrange(&mixed_a, rho_b))?);
        defect = defect.max(trace_distance(&superop.apply(&input)?, &expected)?);
    }
    Ok(DfullReport {
        two_j: block.two_j(),
        d_full: d_a,
        d_free: d_b,
        n_checked: cases.len(),
        defect,
        passed: defect <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{quantum_scheme, sabotaged_scheme, tetrahedron_states, three_qubit_octet};
    use crate::twirl::twirl_su2_exact;

    #[test]
    fn holevo_examples() {
        let z0 = Ket::basis(2, 0).projector();
        let z1 = Ket::basis(2, 1).projector();
        assert!(holevo(&[(0.5, z0.clone()), (0.5, z0.clone())]).unwrap() < 1e-12);
        assert!((holevo(&[(0.5, z0), (0.5, z1)]).unwrap() - 1.0).abs() < 1e-12);
        assert!(holevo(&[(0.7, Ket::basis(2, 0).projector())]).is_err());
    }

    #[test]
    fn tetrahedron_images_carry_no_information() {
        let s = tetrahedron_states().unwrap();
        let t = SchurTransform::shared(2).unwrap();
        let ensemble: Vec<(f64, DensityMatrix)> =
            s.states().iter().map(|k| (0.25, twirl_su2_exact(&k.projector(), &t).unwrap())).collect();
        assert!(holevo(&ensemble).unwrap() < 1e-9);
    }

    #[test]
    fn helstrom_examples() {
        let a = Ket::basis(2, 0).projector();
        let b = Ket::basis(2, 1).projector();
        assert!((helstrom_guess(&a, &a).unwrap() - 0.5).abs() < 1e-15);
        assert!((helstrom_guess(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shipped_schemes_pass() {
        for s in [tetrahedron_states().unwrap(), three_qubit_octet().unwrap()] {
            let r = certify_classical(&s, Tolerances::default()).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.privacy_defect < 1e-10 && r.holevo_bits < 1e-9);
        }
        for (n, srf) in [(2, SrfKind::Su2), (3, SrfKind::Su2), (4, SrfKind::Both), (4, SrfKind::Perm)] {
            let r = certify_quantum(&quantum_scheme(n, srf).unwrap(), 16, 1, Tolerances::default()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn sabotaged_fails_for_every_kind() {
        for srf in SrfKind::ALL {
            let r = certify_classical(&sabotaged_scheme(2, srf).unwrap(), Tolerances::default()).unwrap();
            assert!(!r.passed);
            assert!(r.privacy_defect >= 0.5 - 1e-12, "{srf}: {}", r.privacy_defect);
        }
        let su2 = certify_classical(&sabotaged_scheme(2, SrfKind::Su2).unwrap(), Tolerances::default()).unwrap();
        assert!((su2.privacy_defect - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dfull_blocks() {
        let su2_3 = Superop::for_qubits(SuperopKind::Su2Twirl, 3).unwrap();
        let half = *su2_3.transform().block(1).unwrap();
        assert!(certify_dfull(&half, &su2_3, 8, 1, 1e-10).unwrap().passed);
        let perm_3 = Superop::for_qubits(SuperopKind::PermTwirl, 3).unwrap();
        let r = certify_dfull(&half, &perm_3, 8, 1, 1e-10).unwrap();
        assert!(r.passed && r.d_full == 2);
        let su2_2 = Superop::for_qubits(SuperopKind::Su2Twirl, 2).unwrap();
        let triplet = *su2_2.transform().block(2).unwrap();
        let r = certify_dfull(&triplet, &su2_2, 8, 1, 1e-10).unwrap();
        assert!(r.passed && r.d_free == 1);
        let local = Superop::for_qubits(SuperopKind::BlockDepolarize { two_j: 1, side: Side::P }, 3).unwrap();
        assert!(certify_dfull(&half, &local, 8, 1, 1e-10).unwrap().passed);
        let quartet = *su2_3.transform().block(3).unwrap();
        assert!(certify_dfull(&quartet, &local, 8, 1, 1e-10).is_err());
    }
}
