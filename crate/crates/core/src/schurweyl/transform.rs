use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::counting::{bratteli_paths, dim_p, dim_r, irrep_labels, IrrepLabel};
use super::max_qubits;
use crate::error::{check_dim, Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix, FactorShape, Ket};

/// One `H_jR ⊗ H_jP` block of the Schur basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepBlock {
    pub label: IrrepLabel,
    pub d_r: usize,
    pub d_p: usize,
    /// First column of the block in the Schur unitary.
    pub offset: usize,
}

impl IrrepBlock {
    pub fn two_j(&self) -> u32 {
        self.label.two_j()
    }

    pub fn dim(&self) -> usize {
        self.d_r * self.d_p
    }

    /// `[d_R, d_P]`: the rotation factor is the most significant.
    pub fn shape(&self) -> FactorShape {
        FactorShape::new(vec![self.d_r, self.d_p]).expect("positive dims")
    }

    /// Column of basis vector `|m_index⟩_R |p_index⟩_P`.
    pub fn column(&self, m_index: usize, p_index: usize) -> usize {
        self.offset + m_index * self.d_p + p_index
    }
}

/// The Schur–Weyl change of basis for `n` qubits.
///
/// Columns of `unitary` are coupled states `|j, m, path⟩`. Blocks appear in
/// descending `j`; inside a block the column is `offset + m_index·d_P + p_index`
/// with `m = j, j−1, …, −j` and paths in lexicographic order.
#[derive(Clone, Debug)]
pub struct SchurTransform {
    n_qubits: usize,
    unitary: ComplexMatrix,
    blocks: Vec<IrrepBlock>,
    path_labels: Vec<Vec<Vec<u32>>>,
}

/// Coupled states of the first `k` qubits, keyed by path, one real vector per `m` (descending).
type Multiplets = HashMap<Vec<u32>, Vec<Vec<f64>>>;

fn couple_next_qubit(prev: &Multiplets, k: usize) -> Multiplets {
    // `k` qubits already coupled; the new qubit is the least significant bit.
    let new_dim = 1usize << (k + 1);
    let mut next = Multiplets::new();
    for (path, states) in prev {
        let a = *path.last().unwrap() as i64;
        let state_for = |two_m: i64| -> Option<&Vec<f64>> {
            if two_m.abs() > a {
                return None;
            }
            states.get(((a - two_m) / 2) as usize)
        };
        let targets: &[i64] = if a > 0 { &[1, -1] } else { &[1] };
        for &delta in targets {
            let b = a + delta;
            let mut multiplet = Vec::with_capacity(b as usize + 1);
            for m_index in 0..=b {
                let two_m = b - 2 * m_index;
                let plus = ((a + two_m + 1) as f64 / (2 * (a + 1)) as f64).sqrt();
                let minus = ((a - two_m + 1) as f64 / (2 * (a + 1)) as f64).sqrt();
                // Condon–Shortley coefficients for j ⊗ ½ → j ± ½
                let (c_up, c_down) = if delta == 1 { (plus, minus) } else { (-minus, plus) };
                let mut v = vec![0.0; new_dim];
                if let Some(up) = state_for(two_m - 1) {
                    for (x, &amp) in up.iter().enumerate() {
                        v[2 * x] += c_up * amp;
                    }
                }
                if let Some(down) = state_for(two_m + 1) {
                    for (x, &amp) in down.iter().enumerate() {
                        v[2 * x + 1] += c_down * amp;
                    }
                }
                multiplet.push(v);
            }
            let mut new_path = path.clone();
            new_path.push(b as u32);
            next.insert(new_path, multiplet);
        }
    }
    next
}

/// Builds the transform, rejecting `n_qubits` above [`max_qubits`].
pub fn build_schur_transform(n_qubits: usize) -> Result<SchurTransform> {
    build_schur_transform_with_limit(n_qubits, max_qubits())
}

pub fn build_schur_transform_with_limit(n_qubits: usize, limit: usize) -> Result<SchurTransform> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("n_qubits must be at least 1".into()));
    }
    if n_qubits > limit {
        return Err(Error::Resource { what: "n_qubits", value: n_qubits, limit });
    }
    let mut multiplets = Multiplets::new();
    multiplets.insert(vec![1], vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    for k in 1..n_qubits {
        multiplets = couple_next_qubit(&multiplets, k);
    }

    let dim = 1usize << n_qubits;
    let mut unitary = ComplexMatrix::zeros(dim, dim);
    let mut blocks = Vec::new();
    let mut path_labels = Vec::new();
    let mut offset = 0;
    for label in irrep_labels(n_qubits as u32) {
        let (d_r, d_p) = (dim_r(label), dim_p(label));
        let paths = bratteli_paths(n_qubits as u32, label.two_j());
        if paths.len() != d_p {
            return Err(Error::Construction(format!(
                "path count {} disagrees with multiplicity {d_p} for j = {label}",
                paths.len()
            )));
        }
        let block = IrrepBlock { label, d_r, d_p, offset };
        for (p_index, path) in paths.iter().enumerate() {
            let states = multiplets
                .get(path)
                .ok_or_else(|| Error::Construction(format!("missing coupled states for path {path:?}")))?;
            for (m_index, v) in states.iter().enumerate() {
                let col = block.column(m_index, p_index);
                for (x, &amp) in v.iter().enumerate() {
                    if amp != 0.0 {
                        unitary[(x, col)] = Complex64::new(amp, 0.0);
                    }
                }
            }
        }
        offset += block.dim();
        blocks.push(block);
        path_labels.push(paths);
    }
    debug_assert_eq!(offset, dim);
    Ok(SchurTransform { n_qubits, unitary, blocks, path_labels })
}

static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SchurTransform>>>> = OnceLock::new();

impl SchurTransform {
    /// Process-wide shared instance; built once per `n`.
    pub fn shared(n_qubits: usize) -> Result<Arc<SchurTransform>> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&n_qubits) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(build_schur_transform(n_qubits)?);
        Ok(Arc::clone(cache.lock().unwrap().entry(n_qubits).or_insert(t)))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn blocks(&self) -> &[IrrepBlock] {
        &self.blocks
    }

    pub fn path_labels(&self) -> &[Vec<Vec<u32>>] {
        &self.path_labels
    }

    pub fn block_index(&self, two_j: u32) -> Option<usize> {
        self.blocks.iter().position(|b| b.two_j() == two_j)
    }

    pub fn block(&self, two_j: u32) -> Result<&IrrepBlock> {
        self.block_index(two_j).map(|i| &self.blocks[i]).ok_or_else(|| {
            Error::InvalidArgument(format!("no block with 2j = {two_j} for {} qubits", self.n_qubits))
        })
    }

    /// The computational-basis vector of Schur column `col`.
    pub fn basis_vector(&self, col: usize) -> Vec<Complex64> {
        self.unitary.column(col)
    }

    /// `Σ_c v[c] · column(offset + c)`: embeds a block-local vector.
    pub fn embed_block_vector(&self, block: &IrrepBlock, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(block.dim(), v.len())?;
        Ok((0..self.dim())
            .map(|x| {
                let row = &self.unitary.row(x)[block.offset..block.offset + block.dim()];
                row.iter().zip(v).map(|(u, c)| u * c).sum()
            })
            .collect())
    }

    /// `U_block · m · U_block†` for an operator `m` on one block.
    pub fn embed_block_operator(&self, block: &IrrepBlock, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(block.dim(), m.rows())?;
        check_dim(block.dim(), m.cols())?;
        let cols = self.unitary.submatrix(0, block.offset, self.dim(), block.dim());
        cols.matmul(m)?.matmul(&cols.adjoint())
    }

    /// Schur-basis coefficients `U†ψ`.
    pub fn schur_coefficients(&self, amps: &[Complex64]) -> Result<Vec<Complex64>> {
        self.unitary.adjoint_matvec(amps)
    }

    pub fn to_schur_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim(), m.rows())?;
        m.conjugate_by_adjoint(&self.unitary)
    }

    pub fn from_schur_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim(), m.rows())?;
        m.conjugate_by(&self.unitary)
    }

    pub fn to_schur(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(self.to_schur_matrix(rho.matrix())?))
    }

    pub fn from_schur(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(self.from_schur_matrix(rho.matrix())?))
    }

    pub fn ket_to_schur(&self, ket: &Ket) -> Result<Ket> {
        Ok(Ket::from_raw(self.schur_coefficients(ket.amplitudes())?))
    }

    /// Diagonal sub-block of a Schur-basis matrix and its weight `p_j`.
    pub fn block_project(&self, rho_schur: &ComplexMatrix, block: &IrrepBlock) -> Result<(ComplexMatrix, f64)> {
        check_dim(self.dim(), rho_schur.rows())?;
        let sub = rho_schur.submatrix(block.offset, block.offset, block.dim(), block.dim());
        let weight = sub.trace().re;
        Ok((sub, weight))
    }

    /// Mass of a Schur-basis matrix outside the diagonal blocks (max |entry|).
    pub fn off_block_mass(&self, m_schur: &ComplexMatrix) -> f64 {
        let mut owner = vec![0usize; self.dim()];
        for (b, block) in self.blocks.iter().enumerate() {
            owner[block.offset..block.offset + block.dim()].fill(b);
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if owner[i] != owner[j] {
                    worst = worst.max(m_schur[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn export_header(&self) -> SchurHeader {
        SchurHeader {
            n_qubits: self.n_qubits,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockHeader { two_j: b.two_j(), d_r: b.d_r, d_p: b.d_p, offset: b.offset })
                .collect(),
            path_labels: self.path_labels.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockHeader {
    pub two_j: u32,
    #[serde(rename = "d_R")]
    pub d_r: usize,
    #[serde(rename = "d_P")]
    pub d_p: usize,
    pub offset: usize,
}

/// JSON header written next to the binary unitary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurHeader {
    pub n_qubits: usize,
    pub blocks: Vec<BlockHeader>,
    pub path_labels: Vec<Vec<Vec<u32>>>,
}
