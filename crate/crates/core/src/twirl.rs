//! Group-averaging superoperators on N qubits.
//!
//! Exact twirls use Schur's lemma in the Schur basis: the SU(2) average
//! depolarizes every rotation factor `H_jR`, the S_N average depolarizes every
//! multiplicity factor `H_jP`, and both together depolarize whole blocks.
//! Off-diagonal blocks are always removed. The sampled SU(2) twirl and the
//! enumerated S_N twirl average the group action literally and exist as
//! independent oracles.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::matcore::{
    entropy_of_spectrum, hermitian_eigenvalues, hermitian_trace_norm, partial_trace_matrix, ComplexMatrix,
    DensityMatrix, FactorShape, ZERO,
};
use crate::schurweyl::{apply_collective, permute_matrix, IrrepBlock, Permutation, Rotation, SchurTransform};

/// Largest `N` for which `twirl_perm_enumerated` sums all `N!` terms.
pub const MAX_ENUMERATED_QUBITS: usize = 6;

/// Which private reference frame Eve lacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SrfKind {
    /// Cartesian frame: collective SU(2) rotations.
    Su2,
    /// Reference ordering: qubit permutations.
    Perm,
    Both,
}

impl SrfKind {
    pub const ALL: [SrfKind; 3] = [SrfKind::Su2, SrfKind::Perm, SrfKind::Both];

    pub fn as_str(&self) -> &'static str {
        match self {
            SrfKind::Su2 => "su2",
            SrfKind::Perm => "perm",
            SrfKind::Both => "both",
        }
    }
}

impl fmt::Display for SrfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SrfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su2" => Ok(SrfKind::Su2),
            "perm" => Ok(SrfKind::Perm),
            "both" => Ok(SrfKind::Both),
            other => Err(Error::InvalidArgument(format!("unknown SRF kind {other:?}"))),
        }
    }
}

/// Tensor factor of an irrep block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Rotation factor `H_jR` (first, most significant).
    R,
    /// Multiplicity factor `H_jP` (second).
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperopKind {
    Su2Twirl,
    PermTwirl,
    Both,
    /// Depolarizes one factor of the block with the given `2j`, after pinching
    /// between that block and its complement.
    BlockDepolarize { two_j: u32, side: Side },
}

impl From<SrfKind> for SuperopKind {
    fn from(k: SrfKind) -> Self {
        match k {
            SrfKind::Su2 => SuperopKind::Su2Twirl,
            SrfKind::Perm => SuperopKind::PermTwirl,
            SrfKind::Both => SuperopKind::Both,
        }
    }
}

/// A decohering map bound to the Schur transform of its qubit count.
#[derive(Clone, Debug)]
pub struct Superop {
    kind: SuperopKind,
    transform: Arc<SchurTransform>,
}

impl Superop {
    pub fn new(kind: SuperopKind, transform: Arc<SchurTransform>) -> Result<Self> {
        if let SuperopKind::BlockDepolarize { two_j, .. } = kind {
            transform.block(two_j)?;
        }
        Ok(Self { kind, transform })
    }

    /// Uses the shared transform for `n_qubits`.
    pub fn for_qubits(kind: SuperopKind, n_qubits: usize) -> Result<Self> {
        Self::new(kind, SchurTransform::shared(n_qubits)?)
    }

    pub fn kind(&self) -> SuperopKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.transform.n_qubits()
    }

    pub fn transform(&self) -> &Arc<SchurTransform> {
        &self.transform
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let t = &*self.transform;
        match self.kind {
            SuperopKind::Su2Twirl => twirl_su2_exact(rho, t),
            SuperopKind::PermTwirl => twirl_perm_exact(rho, t),
            SuperopKind::Both => twirl_both_exact(rho, t),
            SuperopKind::BlockDepolarize { two_j, side } => {
                let block = *t.block(two_j)?;
                check_dim(t.dim(), rho.dim())?;
                let mut s = t.to_schur_matrix(rho.matrix())?;
                let (lo, hi) = (block.offset, block.offset + block.dim());
                for i in 0..t.dim() {
                    for j in 0..t.dim() {
                        if (lo..hi).contains(&i) != (lo..hi).contains(&j) {
                            s[(i, j)] = ZERO;
                        }
                    }
                }
                let sub = s.submatrix(lo, lo, block.dim(), block.dim());
                s.set_submatrix(lo, lo, &depolarize_block(&sub, block.d_r, block.d_p, side)?);
                Ok(DensityMatrix::from_trusted(t.from_schur_matrix(&s)?))
            }
        }
    }

    pub fn descriptor(&self) -> Option<SuperopDescriptor> {
        let kind = match self.kind {
            SuperopKind::Su2Twirl => SrfKind::Su2,
            SuperopKind::PermTwirl => SrfKind::Perm,
            SuperopKind::Both => SrfKind::Both,
            SuperopKind::BlockDepolarize { .. } => return None,
        };
        Some(SuperopDescriptor { kind, n: self.n_qubits() })
    }
}

/// Serialized form `{"kind": "su2" | "perm" | "both", "n": N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperopDescriptor {
    pub kind: SrfKind,
    pub n: usize,
}

impl SuperopDescriptor {
    pub fn build(&self) -> Result<Superop> {
        Superop::for_qubits(self.kind.into(), self.n)
    }
}

/// Replaces one factor of a `d_r·d_p` block by its maximally mixed state and
/// keeps the partial trace on the other factor.
pub fn depolarize_block(rho_block: &ComplexMatrix, d_r: usize, d_p: usize, side: Side) -> Result<ComplexMatrix> {
    if !rho_block.is_square() {
        return Err(Error::NotSquare(rho_block.rows(), rho_block.cols()));
    }
    check_dim(d_r * d_p, rho_block.rows())?;
    let shape = FactorShape::new(vec![d_r, d_p])?;
    Ok(match side {
        Side::R => {
            let rest = partial_trace_matrix(rho_block, &shape, &[1])?;
            ComplexMatrix::identity(d_r).scale_real(1.0 / d_r as f64).kron(&rest)
        }
        Side::P => {
            let rest = partial_trace_matrix(rho_block, &shape, &[0])?;
            rest.kron(&ComplexMatrix::identity(d_p).scale_real(1.0 / d_p as f64))
        }
    })
}

fn map_blocks(
    rho: &DensityMatrix,
    t: &SchurTransform,
    f: impl Fn(&ComplexMatrix, &IrrepBlock) -> Result<ComplexMatrix>,
) -> Result<DensityMatrix> {
    check_dim(t.dim(), rho.dim())?;
    let s = t.to_schur_matrix(rho.matrix())?;
    let mut out = ComplexMatrix::zeros(t.dim(), t.dim());
    for block in t.blocks() {
        let (sub, _) = t.block_project(&s, block)?;
        out.set_submatrix(block.offset, block.offset, &f(&sub, block)?);
    }
    Ok(DensityMatrix::from_trusted(t.from_schur_matrix(&out)?))
}

/// `∫ dΩ R(Ω)^{⊗N} ρ R(Ω)^{†⊗N}`, exactly.
pub fn twirl_su2_exact(rho: &DensityMatrix, t: &SchurTransform) -> Result<DensityMatrix> {
    map_blocks(rho, t, |sub, b| depolarize_block(sub, b.d_r, b.d_p, Side::R))
}

/// `(1/N!) Σ_p P(p) ρ P(p)†`, exactly.
pub fn twirl_perm_exact(rho: &DensityMatrix, t: &SchurTransform) -> Result<DensityMatrix> {
    map_blocks(rho, t, |sub, b| depolarize_block(sub, b.d_r, b.d_p, Side::P))
}

/// The SU(2) and S_N twirls composed: each block becomes `p_j · I / (d_R d_P)`.
pub fn twirl_both_exact(rho: &DensityMatrix, t: &SchurTransform) -> Result<DensityMatrix> {
    map_blocks(rho, t, |sub, b| {
        let w = sub.trace().re / b.dim() as f64;
        Ok(ComplexMatrix::identity(b.dim()).scale_real(w))
    })
}

/// Monte-Carlo SU(2) twirl over `n_samples` Haar rotations. Sample `i` draws
/// from ChaCha8 stream `i` of `seed`, so the result does not depend on
/// evaluation order.
pub fn twirl_su2_sampled(rho: &DensityMatrix, n_qubits: usize, n_samples: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(1 << n_qubits, rho.dim())?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let dim = rho.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    let weight = Complex64::new(1.0 / n_samples as f64, 0.0);
    for i in 0..n_samples {
        let rot = Rotation::haar_random(&mut sample_rng(seed, i as u64));
        // R (R ρ)† = R ρ R† for Hermitian ρ
        let mut m = rho.matrix().clone();
        rotate_columns(&rot, n_qubits, &mut m);
        let mut m = m.adjoint();
        rotate_columns(&rot, n_qubits, &mut m);
        acc.add_assign_scaled(&m, weight);
    }
    // exact Hermitian symmetrisation of accumulated rounding
    let herm = acc.add(&acc.adjoint())?.scale_real(0.5);
    let tr = herm.trace().re;
    Ok(DensityMatrix::from_trusted(herm.scale_real(1.0 / tr)))
}

/// Per-sample generator used by every Monte-Carlo routine in the crate.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Left-multiplies `m` by `R^{⊗N}` in place.
fn rotate_columns(rot: &Rotation, n_qubits: usize, m: &mut ComplexMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut col = vec![ZERO; rows];
    for j in 0..cols {
        for i in 0..rows {
            col[i] = m[(i, j)];
        }
        apply_collective(rot, n_qubits, &mut col);
        for i in 0..rows {
            m[(i, j)] = col[i];
        }
    }
}

/// Literal average over all `N!` permutation conjugations (`N ≤ 6`).
pub fn twirl_perm_enumerated(rho: &DensityMatrix, n_qubits: usize) -> Result<DensityMatrix> {
    if n_qubits > MAX_ENUMERATED_QUBITS {
        return Err(Error::Resource { what: "n_qubits for S_N enumeration", value: n_qubits, limit: MAX_ENUMERATED_QUBITS });
    }
    check_dim(1 << n_qubits, rho.dim())?;
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    let mut count = 0usize;
    for p in Permutation::all(n_qubits) {
        acc.add_assign_scaled(&permute_matrix(&p, rho.matrix())?, Complex64::new(1.0, 0.0));
        count += 1;
    }
    Ok(DensityMatrix::from_trusted(acc.scale_real(1.0 / count as f64)))
}

/// A twirl image stored by its nontrivial block factors.
///
/// For SU(2) each block image is `I_R/d_R ⊗ F_j` and `F_j` is `d_P × d_P`;
/// for S_N it is `F_j ⊗ I_P/d_P` with `F_j` of size `d_R`; for both it is
/// `F_j · I/(d_R d_P)` with `F_j` a 1×1 weight. Trace distances and entropies
/// are computed on the factors alone.
#[derive(Clone, Debug)]
pub struct TwirlImage {
    kind: SrfKind,
    factors: Vec<ComplexMatrix>,
}

impl TwirlImage {
    /// Image of a pure state given by its amplitudes.
    pub fn of_amplitudes(kind: SrfKind, t: &SchurTransform, amps: &[Complex64]) -> Result<Self> {
        check_dim(t.dim(), amps.len())?;
        let c = t.schur_coefficients(amps)?;
        let factors = t
            .blocks()
            .iter()
            .map(|b| {
                let coef = |r: usize, p: usize| c[b.column(r, p)];
                match kind {
                    SrfKind::Su2 => ComplexMatrix::from_fn(b.d_p, b.d_p, |p, q| {
                        (0..b.d_r).map(|r| coef(r, p) * coef(r, q).conj()).sum()
                    }),
                    SrfKind::Perm => ComplexMatrix::from_fn(b.d_r, b.d_r, |r, s| {
                        (0..b.d_p).map(|p| coef(r, p) * coef(s, p).conj()).sum()
                    }),
                    SrfKind::Both => {
                        let w: f64 = c[b.offset..b.offset + b.dim()].iter().map(|z| z.norm_sqr()).sum();
                        ComplexMatrix::from_real_diag(&[w])
                    }
                }
            })
            .collect();
        Ok(Self { kind, factors })
    }

    pub fn of_density(kind: SrfKind, t: &SchurTransform, rho: &DensityMatrix) -> Result<Self> {
        check_dim(t.dim(), rho.dim())?;
        let s = t.to_schur_matrix(rho.matrix())?;
        let factors = t
            .blocks()
            .iter()
            .map(|b| {
                let (sub, w) = t.block_project(&s, b)?;
                let shape = b.shape();
                match kind {
                    SrfKind::Su2 => partial_trace_matrix(&sub, &shape, &[1]),
                    SrfKind::Perm => partial_trace_matrix(&sub, &shape, &[0]),
                    SrfKind::Both => Ok(ComplexMatrix::from_real_diag(&[w])),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { kind, factors })
    }

    pub fn kind(&self) -> SrfKind {
        self.kind
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    /// Block weights `p_j`.
    pub fn weights(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.trace().re).collect()
    }

    fn multiplicity(&self, b: &IrrepBlock) -> usize {
        match self.kind {
            SrfKind::Su2 => b.d_r,
            SrfKind::Perm => b.d_p,
            SrfKind::Both => b.dim(),
        }
    }

    pub fn to_density(&self, t: &SchurTransform) -> Result<DensityMatrix> {
        let mut s = ComplexMatrix::zeros(t.dim(), t.dim());
        for (b, f) in t.blocks().iter().zip(&self.factors) {
            let block = match self.kind {
                SrfKind::Su2 => ComplexMatrix::identity(b.d_r).scale_real(1.0 / b.d_r as f64).kron(f),
                SrfKind::Perm => f.kron(&ComplexMatrix::identity(b.d_p).scale_real(1.0 / b.d_p as f64)),
                SrfKind::Both => ComplexMatrix::identity(b.dim()).scale_real(f[(0, 0)].re / b.dim() as f64),
            };
            s.set_submatrix(b.offset, b.offset, &block);
        }
        Ok(DensityMatrix::from_trusted(t.from_schur_matrix(&s)?))
    }

    fn check_compatible(&self, other: &TwirlImage) -> Result<()> {
        if self.kind != other.kind || self.factors.len() != other.factors.len() {
            return Err(Error::InvalidArgument("twirl images of different superoperators".into()));
        }
        Ok(())
    }

    /// Trace distance between the two full images.
    pub fn trace_distance(&self, other: &TwirlImage) -> Result<f64> {
        self.check_compatible(other)?;
        let mut sum = 0.0;
        for (a, b) in self.factors.iter().zip(&other.factors) {
            sum += hermitian_trace_norm(&a.sub(b)?)?;
        }
        Ok((0.5 * sum).clamp(0.0, 1.0))
    }

    /// Von Neumann entropy (bits) of the full image.
    pub fn entropy(&self, t: &SchurTransform) -> Result<f64> {
        let mut s = 0.0;
        for (b, f) in t.blocks().iter().zip(&self.factors) {
            let mult = self.multiplicity(b) as f64;
            let eig = hermitian_eigenvalues(f)?;
            // each eigenvalue λ of F_j appears `mult` times as λ/mult
            let scaled: Vec<f64> = eig.iter().map(|l| l.max(0.0) / mult).collect();
            s += mult * entropy_of_spectrum(&scaled);
        }
        Ok(s)
    }

    /// Convex combination with the given weights.
    pub fn mixture(images: &[TwirlImage], weights: &[f64]) -> Result<TwirlImage> {
        let first = images
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        check_dim(images.len(), weights.len())?;
        let mut factors: Vec<ComplexMatrix> =
            first.factors.iter().map(|f| ComplexMatrix::zeros(f.rows(), f.cols())).collect();
        for (img, &w) in images.iter().zip(weights) {
            first.check_compatible(img)?;
            for (acc, f) in factors.iter_mut().zip(&img.factors) {
                acc.add_assign_scaled(f, Complex64::new(w, 0.0));
            }
        }
        Ok(TwirlImage { kind: first.kind, factors })
    }
}
