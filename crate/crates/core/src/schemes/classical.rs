use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::Value;

use super::shift::{cyclic_shift_states, root_of_unity};
use super::quantum::quantum_scheme;
use super::{params_from, ClassicalScheme};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix, Ket, ONE, ZERO};
use crate::schurweyl::{format_two_j, IrrepBlock, SchurTransform};
use crate::twirl::SrfKind;

/// Amplitudes in the computational basis of a vector given by its
/// block-local Schur coefficients, indexed `r·d_P + p`.
fn embed(t: &SchurTransform, block: &IrrepBlock, local: &[Complex64]) -> Result<Vec<Complex64>> {
    t.embed_block_vector(block, local)
}

fn add_scaled(acc: &mut [Complex64], v: &[Complex64], s: Complex64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b * s;
    }
}

/// `(1/√K) Σ_a ω_K^{μa} v_a` for `μ = 0..K`, where `v_a` ranges over `per_block`.
fn fourier_over_blocks(per_block: &[Vec<Complex64>]) -> Vec<Ket> {
    let k = per_block.len();
    let norm = 1.0 / (k as f64).sqrt();
    (0..k)
        .map(|mu| {
            let mut acc = vec![ZERO; per_block[0].len()];
            for (a, v) in per_block.iter().enumerate() {
                add_scaled(&mut acc, v, root_of_unity(mu * a, k) * norm);
            }
            Ket::from_raw(acc)
        })
        .collect()
}

/// Block operator `A ⊗ B` embedded into the full space.
fn embed_product(t: &SchurTransform, block: &IrrepBlock, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    t.embed_block_operator(block, &a.kron(b))
}

fn normalized_projector(dim: usize, rank: usize) -> ComplexMatrix {
    let diag: Vec<f64> = (0..dim).map(|i| if i < rank { 1.0 / rank as f64 } else { 0.0 }).collect();
    ComplexMatrix::from_real_diag(&diag)
}

/// Spin coherent state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` along unit vector `n`.
fn coherent_state(n: [f64; 3]) -> [Complex64; 2] {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    [Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)]
}

/// Four two-qubit states `½|ψ⁻⟩ + (√3/2) e^{iα_i} |n_i n_i⟩`, with `n_i` the
/// vertices of a regular tetrahedron. Each twirls to `I/4`.
pub fn tetrahedron_states() -> Result<ClassicalScheme> {
    let s = 1.0 / 3f64.sqrt();
    let dirs = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let coherent: Vec<[Complex64; 2]> = dirs.iter().map(|&d| coherent_state(d)).collect();
    let overlap_sq = |i: usize, j: usize| {
        let (a, b) = (coherent[i], coherent[j]);
        let o = a[0].conj() * b[0] + a[1].conj() * b[1];
        o * o
    };
    // fix α₁ = 0 and choose α_j so that pair (1, j) is orthogonal
    let alphas: Vec<f64> = (0..4).map(|j| if j == 0 { 0.0 } else { PI - overlap_sq(0, j).arg() }).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            let v = Complex64::from_polar(1.0, alphas[j] - alphas[i]) * overlap_sq(i, j);
            if (v + 1.0 / 3.0).norm() > 1e-12 {
                return Err(Error::Construction(format!("tetrahedron phases fail for pair ({i}, {j})")));
            }
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), ZERO];
    let states = coherent
        .iter()
        .zip(&alphas)
        .map(|(c, &alpha)| {
            let phase = Complex64::from_polar(3f64.sqrt() / 2.0, alpha);
            let amps = (0..4).map(|x| singlet[x] * 0.5 + phase * c[x >> 1] * c[x & 1]).collect();
            Ket::new(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    ClassicalScheme::new(
        2,
        SrfKind::Su2,
        "tetrahedron",
        Default::default(),
        states,
        DensityMatrix::maximally_mixed(4),
    )
}

/// Eight three-qubit states `(|3/2,μ⟩ ± |1/2,μ⟩)/√2`: the `j = 3/2` part runs
/// over the canonical `m` basis and the `j = 1/2` part over four maximally
/// entangled states of `H_R ⊗ H_P`. All twirl to `I/8`.
pub fn three_qubit_octet() -> Result<ClassicalScheme> {
    let t = SchurTransform::shared(3)?;
    let (quartet, doublet) = (*t.block(3)?, *t.block(1)?);
    let entangled = cyclic_shift_states(2, 2)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut states = Vec::with_capacity(8);
    for sign in [1.0, -1.0] {
        for (mu, e) in entangled.iter().enumerate() {
            let mut local = vec![ZERO; 4];
            local[mu] = ONE;
            let mut amps = embed(&t, &quartet, &local)?;
            add_scaled(&mut amps, &embed(&t, &doublet, e.amplitudes())?, Complex64::new(sign, 0.0));
            amps.iter_mut().for_each(|a| *a *= h);
            states.push(Ket::new(amps)?);
        }
    }
    ClassicalScheme::new(3, SrfKind::Su2, "octet", Default::default(), states, DensityMatrix::maximally_mixed(8))
}

/// Fourier-transformed entangled states over the blocks `j_min ≤ j < N/2`,
/// using the first `d = 2j_min + 1` vectors of each factor.
///
/// Produces `K·d²` states with `K = N/2 − j_min`, all mapped by the SU(2) twirl
/// to `(1/K) Σ_j (I_R/d_R) ⊗ (Π_d/d)`.
pub fn su2_classical_scheme(n_qubits: usize, two_j_min: u32) -> Result<ClassicalScheme> {
    let t = SchurTransform::shared(n_qubits)?;
    let n = n_qubits as u32;
    if two_j_min >= n || !(n - two_j_min).is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "j_min = {} must satisfy 0 <= j_min < N/2 with N = {n_qubits}",
            format_two_j(two_j_min)
        )));
    }
    let d = two_j_min as usize + 1;
    let blocks: Vec<IrrepBlock> =
        (two_j_min..n).step_by(2).map(|tj| t.block(tj).copied()).collect::<Result<_>>()?;
    if let Some(b) = blocks.iter().find(|b| b.d_p < d) {
        return Err(Error::Construction(format!("block 2j = {} has d_P = {} < {d}", b.two_j(), b.d_p)));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut per_kl: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let vs = blocks
                .iter()
                .map(|b| {
                    let mut local = vec![ZERO; b.dim()];
                    for s in 0..d {
                        local[s * b.d_p + (s + l) % d] = root_of_unity(s * k, d) * norm;
                    }
                    embed(&t, b, &local)
                })
                .collect::<Result<_>>()?;
            per_kl.push(vs);
        }
    }
    // order: μ outermost, then (k, l)
    let transformed: Vec<Vec<Ket>> = per_kl.iter().map(|vs| fourier_over_blocks(vs)).collect();
    let states: Vec<Ket> =
        (0..blocks.len()).flat_map(|mu| transformed.iter().map(move |f| f[mu].clone())).collect();

    let mut rho0 = ComplexMatrix::zeros(t.dim(), t.dim());
    for b in &blocks {
        let term = embed_product(&t, b, &ComplexMatrix::identity(b.d_r).scale_real(1.0 / b.d_r as f64), &normalized_projector(b.d_p, d))?;
        rho0.add_assign_scaled(&term, Complex64::new(1.0 / blocks.len() as f64, 0.0));
    }
    ClassicalScheme::new(
        n_qubits,
        SrfKind::Su2,
        "su2-classical",
        params_from([("jmin", Value::from(format_two_j(two_j_min)))]),
        states,
        DensityMatrix::from_trusted(rho0),
    )
}

/// Default irrep set for the S_N scheme: every `j` with `d_P ≥ d_R`.
pub(crate) fn default_perm_irreps(t: &SchurTransform) -> Vec<u32> {
    t.blocks().iter().filter(|b| b.d_p >= b.d_r).map(|b| b.two_j()).collect()
}

/// Entangled states in each chosen block (P factor depolarized, R kept),
/// truncated to a common count `m` and Fourier-transformed across blocks.
///
/// `irreps` lists `2j` values; `None` selects every block with `d_P ≥ d_R`.
pub fn perm_classical_scheme(n_qubits: usize, irreps: Option<&[u32]>) -> Result<ClassicalScheme> {
    let t = SchurTransform::shared(n_qubits)?;
    let mut chosen: Vec<u32> = match irreps {
        Some(set) => set.to_vec(),
        None => default_perm_irreps(&t),
    };
    chosen.sort_unstable_by(|a, b| b.cmp(a));
    chosen.dedup();
    if chosen.is_empty() {
        return Err(Error::InvalidArgument("empty irrep set".into()));
    }
    let blocks: Vec<IrrepBlock> = chosen.iter().map(|&tj| t.block(tj).copied()).collect::<Result<_>>()?;
    let per_block: Vec<Vec<Ket>> = blocks.iter().map(|b| cyclic_shift_states(b.d_p, b.d_r)).collect::<Result<_>>()?;
    let m = per_block.iter().map(Vec::len).min().unwrap_or(0);

    let mut embedded: Vec<Vec<Vec<Complex64>>> = vec![Vec::with_capacity(blocks.len()); m];
    for (b, states) in blocks.iter().zip(&per_block) {
        for (i, s) in states.iter().take(m).enumerate() {
            // shift states are indexed (P, R); the block layout is (R, P)
            let mut local = vec![ZERO; b.dim()];
            for p in 0..b.d_p {
                for r in 0..b.d_r {
                    local[r * b.d_p + p] = s.amplitudes()[p * b.d_r + r];
                }
            }
            embedded[i].push(embed(&t, b, &local)?);
        }
    }
    let transformed: Vec<Vec<Ket>> = embedded.iter().map(|vs| fourier_over_blocks(vs)).collect();
    let states: Vec<Ket> =
        (0..blocks.len()).flat_map(|mu| transformed.iter().map(move |f| f[mu].clone())).collect();

    let mut rho0 = ComplexMatrix::zeros(t.dim(), t.dim());
    for b in &blocks {
        let sigma_r = normalized_projector(b.d_r, b.d_r.min(b.d_p));
        let term = embed_product(&t, b, &sigma_r, &ComplexMatrix::identity(b.d_p).scale_real(1.0 / b.d_p as f64))?;
        rho0.add_assign_scaled(&term, Complex64::new(1.0 / blocks.len() as f64, 0.0));
    }
    let labels: Vec<Value> = chosen.iter().map(|&tj| Value::from(format_two_j(tj))).collect();
    ClassicalScheme::new(
        n_qubits,
        SrfKind::Perm,
        "perm-classical",
        params_from([("irreps", Value::Array(labels))]),
        states,
        DensityMatrix::from_trusted(rho0),
    )
}

/// Orthogonal states filling the block that maximizes `d_R·d_P` (ties toward
/// smaller `j`); all are mapped by the combined twirl to `Π_j/(d_R d_P)`.
///
/// Entangled S_N-scheme states are used when `d_P ≥ d_R`, otherwise the block's
/// canonical basis, which has the same size and image.
pub fn both_private_classical_scheme(n_qubits: usize) -> Result<ClassicalScheme> {
    let t = SchurTransform::shared(n_qubits)?;
    let block = super::quantum::quantum_target_block(&t, SrfKind::Both);
    let states = if block.d_p >= block.d_r {
        let single = perm_classical_scheme(n_qubits, Some(&[block.two_j()]))?;
        single.states().to_vec()
    } else {
        (0..block.dim())
            .map(|c| {
                let mut local = vec![ZERO; block.dim()];
                local[c] = ONE;
                embed(&t, &block, &local).map(Ket::from_raw)
            })
            .collect::<Result<_>>()?
    };
    let rho0 = t.embed_block_operator(&block, &ComplexMatrix::identity(block.dim()).scale_real(1.0 / block.dim() as f64))?;
    ClassicalScheme::new(
        n_qubits,
        SrfKind::Both,
        "both-classical",
        params_from([("j", Value::from(format_two_j(block.two_j())))]),
        states,
        DensityMatrix::from_trusted(rho0),
    )
}

/// The columns of the optimal quantum code used as classical signal states.
pub fn quantum_basis_scheme(n_qubits: usize, srf: SrfKind) -> Result<ClassicalScheme> {
    let q = quantum_scheme(n_qubits, srf)?;
    let v = q.isometry();
    let states: Vec<Ket> = (0..v.cols()).map(|c| Ket::from_raw(v.column(c))).collect();
    ClassicalScheme::new(
        n_qubits,
        srf,
        "quantum-basis",
        params_from([("j", Value::from(format_two_j(q.target_block().two_j())))]),
        states,
        q.claimed_rho0().clone(),
    )
}

/// Computational basis states claimed to be private. They are not: this is a
/// negative control that certification must reject for every SRF kind.
pub fn sabotaged_scheme(n_qubits: usize, srf: SrfKind) -> Result<ClassicalScheme> {
    let dim = SchurTransform::shared(n_qubits)?.dim();
    let states: Vec<Ket> = (0..dim).map(|x| Ket::basis(dim, x)).collect();
    ClassicalScheme::new(
        n_qubits,
        srf,
        "sabotaged",
        Default::default(),
        states,
        DensityMatrix::maximally_mixed(dim),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{gram_orthonormality, trace_distance};
    use crate::twirl::{Superop, TwirlImage};

    /// Dense oracle: twirl every state and compare to the claimed ρ₀.
    fn max_residual(s: &ClassicalScheme) -> f64 {
        let op = Superop::for_qubits(s.srf().into(), s.n_qubits()).unwrap();
        s.states()
            .iter()
            .map(|k| trace_distance(&op.apply(&k.projector()).unwrap(), s.claimed_rho0()).unwrap())
            .fold(0.0, f64::max)
    }

    fn check(s: &ClassicalScheme, size: usize) {
        assert_eq!(s.len(), size, "{}", s.id());
        assert!(gram_orthonormality(s.states()).unwrap() < 1e-10, "{}", s.id());
        assert!(max_residual(s) < 1e-10, "{}", s.id());
    }

    #[test]
    fn tetrahedron() {
        let s = tetrahedron_states().unwrap();
        check(&s, 4);
        let t = SchurTransform::shared(2).unwrap();
        for k in s.states() {
            let w = TwirlImage::of_amplitudes(SrfKind::Both, &t, k.amplitudes()).unwrap().weights();
            // blocks are j = 1 then j = 0
            assert!((w[0] - 0.75).abs() < 1e-12 && (w[1] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn octet() {
        let s = three_qubit_octet().unwrap();
        check(&s, 8);
        check(&s.for_both().unwrap(), 8);
    }

    #[test]
    fn su2_sizes() {
        check(&su2_classical_scheme(4, 2).unwrap(), 9);
        check(&su2_classical_scheme(4, 0).unwrap(), 2);
        check(&su2_classical_scheme(3, 1).unwrap(), 4);
        check(&su2_classical_scheme(6, 2).unwrap(), 18);
        check(&su2_classical_scheme(6, 4).unwrap(), 25);
        assert!(su2_classical_scheme(4, 4).is_err());
        assert!(su2_classical_scheme(4, 1).is_err());
    }

    #[test]
    fn perm_sizes() {
        check(&perm_classical_scheme(4, Some(&[2, 0])).unwrap(), 4);
        check(&perm_classical_scheme(4, Some(&[2])).unwrap(), 9);
        check(&perm_classical_scheme(2, Some(&[2, 0])).unwrap(), 2);
        check(&perm_classical_scheme(5, None).unwrap(), 2 * 10);
        assert!(perm_classical_scheme(4, Some(&[])).is_err());
        assert!(perm_classical_scheme(4, Some(&[3])).is_err());
    }

    #[test]
    fn both_sizes() {
        check(&both_private_classical_scheme(4).unwrap(), 9);
        check(&both_private_classical_scheme(3).unwrap(), 4);
        check(&both_private_classical_scheme(2).unwrap(), 3);
    }

    #[test]
    fn quantum_basis() {
        check(&quantum_basis_scheme(2, SrfKind::Su2).unwrap(), 3);
        check(&quantum_basis_scheme(4, SrfKind::Perm).unwrap(), 3);
        check(&quantum_basis_scheme(4, SrfKind::Both).unwrap(), 9);
    }

    #[test]
    fn sabotaged_is_not_private() {
        for srf in SrfKind::ALL {
            let s = sabotaged_scheme(2, srf).unwrap();
            assert!(gram_orthonormality(s.states()).unwrap() < 1e-15);
            assert!(max_residual(&s) > 0.1);
        }
    }
}
