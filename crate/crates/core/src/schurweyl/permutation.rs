use itertools::Itertools;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix, Ket, ONE};

/// A permutation of qubit positions: `images[i]` is where position `i` is sent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Cycle `0 → 1 → … → n−1 → 0`.
    pub fn cycle(n: usize) -> Self {
        Self { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!("transposition ({a} {b}) outside 0..{n}")));
        }
        images.swap(a, b);
        Ok(Self { images })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Self { images }
    }

    /// Every element of `S_n`, in lexicographic order of `images`.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_dim(self.n(), other.n())?;
        Ok(Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Permutation { images }
    }

    /// Computational index of `P(p)|x⟩`: the bit of qubit `i` moves to qubit `p(i)`.
    pub fn map_index(&self, x: usize) -> usize {
        let n = self.n();
        let mut y = 0;
        for (i, &target) in self.images.iter().enumerate() {
            if (x >> (n - 1 - i)) & 1 == 1 {
                y |= 1 << (n - 1 - target);
            }
        }
        y
    }

    fn index_table(&self) -> Vec<usize> {
        (0..1usize << self.n()).map(|x| self.map_index(x)).collect()
    }
}

/// The unitary `P(p)` on `n_qubits` qubits.
pub fn permutation_operator(p: &Permutation, n_qubits: usize) -> Result<ComplexMatrix> {
    check_dim(n_qubits, p.n())?;
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (x, y) in p.index_table().into_iter().enumerate() {
        m[(y, x)] = ONE;
    }
    Ok(m)
}

pub fn permute_ket(p: &Permutation, ket: &Ket) -> Result<Ket> {
    check_dim(1 << p.n(), ket.dim())?;
    let mut out = vec![Complex64::new(0.0, 0.0); ket.dim()];
    for (x, &a) in ket.amplitudes().iter().enumerate() {
        out[p.map_index(x)] = a;
    }
    Ok(Ket::from_raw(out))
}

/// `P ρ P†` by index relabelling.
pub fn permute_matrix(p: &Permutation, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(1 << p.n(), m.rows())?;
    check_dim(m.rows(), m.cols())?;
    let table = p.index_table();
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for (x, &px) in table.iter().enumerate() {
        for (y, &py) in table.iter().enumerate() {
            out[(px, py)] = m[(x, y)];
        }
    }
    Ok(out)
}

pub fn permute_density(p: &Permutation, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(permute_matrix(p, rho.matrix())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    #[test]
    fn identity_operator() {
        assert_eq!(permutation_operator(&Permutation::identity(3), 3).unwrap(), ComplexMatrix::identity(8));
    }

    #[test]
    fn swap_sends_01_to_10() {
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        let out = permute_ket(&swap, &Ket::basis(4, 0b01)).unwrap();
        assert_eq!(out, Ket::basis(4, 0b10));
    }

    #[test]
    fn three_cycle_cubed_is_identity() {
        let c = permutation_operator(&Permutation::cycle(3), 3).unwrap();
        let c3 = c.matmul(&c).unwrap().matmul(&c).unwrap();
        assert_eq!(c3, ComplexMatrix::identity(8));
        assert_ne!(c, ComplexMatrix::identity(8));
    }

    #[test]
    fn moves_qubit_to_its_image() {
        // 0 → 1, 1 → 2, 2 → 0 : |100⟩ has qubit 0 set, so the result has qubit 1 set.
        assert_eq!(Permutation::cycle(3).map_index(0b100), 0b010);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(permutation_operator(&Permutation::identity(2), 3).is_err());
    }

    #[test]
    fn homomorphism_on_s3() {
        let all: Vec<_> = Permutation::all(3).collect();
        assert_eq!(all.len(), 6);
        for p in &all {
            for q in &all {
                let lhs = permutation_operator(&p.compose(q).unwrap(), 3).unwrap();
                let rhs = permutation_operator(p, 3).unwrap().matmul(&permutation_operator(q, 3).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
