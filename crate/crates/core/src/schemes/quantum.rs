use crate::error::{check_dim, Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix, Ket};
use crate::schurweyl::{IrrepBlock, SchurTransform};
use crate::twirl::SrfKind;

/// An isometric encoding of a logical system into a completely private
/// subsystem of `N` qubits.
#[derive(Clone, Debug)]
pub struct QuantumScheme {
    n_qubits: usize,
    srf: SrfKind,
    isometry: ComplexMatrix,
    target_block: IrrepBlock,
    /// Index of the fixed R-factor basis state when only the P factor carries data.
    ancilla_index: Option<usize>,
    claimed_rho0: DensityMatrix,
}

impl QuantumScheme {
    pub fn new(
        n_qubits: usize,
        srf: SrfKind,
        isometry: ComplexMatrix,
        target_block: IrrepBlock,
        ancilla_index: Option<usize>,
        claimed_rho0: DensityMatrix,
    ) -> Result<Self> {
        let dim = 1usize << n_qubits;
        check_dim(dim, isometry.rows())?;
        check_dim(dim, claimed_rho0.dim())?;
        let defect = isometry.adjoint_matmul(&isometry)?.max_abs_diff(&ComplexMatrix::identity(isometry.cols()))?;
        if defect > 1e-10 {
            return Err(Error::Construction(format!("encoding is not an isometry (defect {defect:.3e})")));
        }
        Ok(Self { n_qubits, srf, isometry, target_block, ancilla_index, claimed_rho0 })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn srf(&self) -> SrfKind {
        self.srf
    }

    pub fn logical_dim(&self) -> usize {
        self.isometry.cols()
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    pub fn target_block(&self) -> &IrrepBlock {
        &self.target_block
    }

    pub fn ancilla_index(&self) -> Option<usize> {
        self.ancilla_index
    }

    pub fn claimed_rho0(&self) -> &DensityMatrix {
        &self.claimed_rho0
    }

    pub fn id(&self) -> String {
        format!("quantum/n{}/{}/j={}", self.n_qubits, self.srf, self.target_block.label)
    }

    pub fn encode(&self, logical: &Ket) -> Result<Ket> {
        Ok(Ket::from_raw(self.isometry.matvec(logical.amplitudes())?))
    }

    pub fn encode_density(&self, logical: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.logical_dim(), logical.dim())?;
        Ok(DensityMatrix::from_trusted(self.isometry.matmul(logical.matrix())?.matmul(&self.isometry.adjoint())?))
    }
}

/// The block carrying the largest completely private subsystem for `srf`.
///
/// SU(2): the symmetric block `j = N/2`. S_N: the block with the largest
/// `d_P`. Both: the block with the largest `d_R·d_P`. Ties go to smaller `j`.
pub fn quantum_target_block(t: &SchurTransform, srf: SrfKind) -> IrrepBlock {
    let blocks = t.blocks().iter().copied();
    // blocks run in descending j and max_by_key keeps the last maximum
    match srf {
        SrfKind::Su2 => t.blocks()[0],
        SrfKind::Perm => blocks.max_by_key(|b| b.d_p).expect("at least one block"),
        SrfKind::Both => blocks.max_by_key(|b| b.dim()).expect("at least one block"),
    }
}

/// The optimal private quantum code for `srf` on `n_qubits` qubits.
pub fn quantum_scheme(n_qubits: usize, srf: SrfKind) -> Result<QuantumScheme> {
    let t = SchurTransform::shared(n_qubits)?;
    let block = quantum_target_block(&t, srf);
    let (columns, ancilla): (Vec<usize>, Option<usize>) = match srf {
        SrfKind::Su2 | SrfKind::Both => ((block.offset..block.offset + block.dim()).collect(), None),
        SrfKind::Perm => ((0..block.d_p).map(|p| block.column(0, p)).collect(), Some(0)),
    };
    let u = t.unitary();
    let v = ComplexMatrix::from_fn(t.dim(), columns.len(), |i, c| u[(i, columns[c])]);
    let local_rho0 = match srf {
        SrfKind::Su2 | SrfKind::Both => ComplexMatrix::identity(block.dim()).scale_real(1.0 / block.dim() as f64),
        SrfKind::Perm => {
            let mut sigma0 = ComplexMatrix::zeros(block.d_r, block.d_r);
            sigma0[(0, 0)] = crate::matcore::ONE;
            sigma0.kron(&ComplexMatrix::identity(block.d_p).scale_real(1.0 / block.d_p as f64))
        }
    };
    let rho0 = DensityMatrix::from_trusted(t.embed_block_operator(&block, &local_rho0)?);
    QuantumScheme::new(n_qubits, srf, v, block, ancilla, rho0)
}

/// Bob's decoding `V†ρV`, renormalized.
pub fn quantum_decode(scheme: &QuantumScheme, rho_received: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(scheme.isometry.rows(), rho_received.dim())?;
    let v = &scheme.isometry;
    let logical = v.adjoint_matmul(&rho_received.matrix().matmul(v)?)?;
    let tr = logical.trace().re;
    if tr < 1e-12 {
        return Err(Error::Decode(format!("received state has weight {tr:.3e} on the code")));
    }
    let logical = logical.scale_real(1.0 / tr);
    let herm = logical.add(&logical.adjoint())?.scale_real(0.5);
    Ok(DensityMatrix::from_trusted(herm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::fidelity_pure;
    use crate::schurweyl::{permute_density, Permutation};
    use crate::twirl::{twirl_perm_exact, Superop};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logical_dimensions() {
        assert_eq!(quantum_scheme(2, SrfKind::Su2).unwrap().logical_dim(), 3);
        assert_eq!(quantum_scheme(3, SrfKind::Su2).unwrap().logical_dim(), 4);
        let sn6 = quantum_scheme(6, SrfKind::Perm).unwrap();
        assert_eq!(sn6.logical_dim(), 9);
        assert_eq!(sn6.target_block().two_j(), 2);
        assert_eq!(quantum_scheme(4, SrfKind::Both).unwrap().logical_dim(), 9);
        // N = 3, both: d_R d_P = 4 for j = 3/2 and j = 1/2; the tie goes to 1/2
        assert_eq!(quantum_scheme(3, SrfKind::Both).unwrap().target_block().two_j(), 1);
    }

    #[test]
    fn round_trip_and_privacy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for srf in SrfKind::ALL {
            let q = quantum_scheme(4, srf).unwrap();
            let op = Superop::for_qubits(srf.into(), 4).unwrap();
            for _ in 0..4 {
                let phi = Ket::random(q.logical_dim(), &mut rng);
                let rho = q.encode(&phi).unwrap().projector();
                let back = quantum_decode(&q, &rho).unwrap();
                assert!((fidelity_pure(&phi, &back).unwrap() - 1.0).abs() < 1e-10);
                let seen = op.apply(&rho).unwrap();
                assert!(seen.matrix().max_abs_diff(q.claimed_rho0().matrix()).unwrap() < 1e-12);
                // decoding Eve's view gives the maximally mixed logical state (SU(2) and both)
                if srf != SrfKind::Perm {
                    let mixed = quantum_decode(&q, &seen).unwrap();
                    let target = DensityMatrix::maximally_mixed(q.logical_dim());
                    assert!(mixed.matrix().max_abs_diff(target.matrix()).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn symmetric_code_survives_permutations() {
        let q = quantum_scheme(3, SrfKind::Su2).unwrap();
        let t = SchurTransform::shared(3).unwrap();
        let phi = Ket::random(4, &mut ChaCha8Rng::seed_from_u64(8));
        let rho = q.encode(&phi).unwrap().projector();
        let swapped = permute_density(&Permutation::cycle(3), &rho).unwrap();
        assert!((fidelity_pure(&phi, &quantum_decode(&q, &swapped).unwrap()).unwrap() - 1.0).abs() < 1e-10);
        let twirled = twirl_perm_exact(&rho, &t).unwrap();
        assert!((fidelity_pure(&phi, &quantum_decode(&q, &twirled).unwrap()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn decode_without_support_fails() {
        let q = quantum_scheme(2, SrfKind::Su2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = Ket::new(vec![
            crate::matcore::ZERO,
            num_complex::Complex64::new(h, 0.0),
            num_complex::Complex64::new(-h, 0.0),
            crate::matcore::ZERO,
        ])
        .unwrap();
        assert!(matches!(quantum_decode(&q, &singlet.projector()), Err(Error::Decode(_))));
    }
}
