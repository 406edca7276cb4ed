use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        check_dim(rows * cols, data.len())?;
        if let Some(bad) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite entry at ({}, {})",
                bad / cols,
                bad % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &Self, s: Complex64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    /// `self† · other` without materialising the adjoint.
    pub fn adjoint_matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.rows, other.rows)?;
        let (n, m) = (self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &a) in a_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let a = a.conj();
                for (o, &b) in out[i * m..(i + 1) * m].iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self† · v`.
    pub fn adjoint_matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.rows, v.len())?;
        let mut out = vec![ZERO; self.cols];
        for (k, &vk) in v.iter().enumerate() {
            if vk == ZERO {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(k)) {
                *o += a.conj() * vk;
            }
        }
        Ok(out)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// `U† · self · U`.
    pub fn conjugate_by_adjoint(&self, u: &Self) -> Result<Self> {
        u.adjoint_matmul(self)?.matmul(u)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let base = (i * other.rows + k) * cols + j * other.cols;
                    for (l, &b) in other.row(k).iter().enumerate() {
                        data[base + l] = a * b;
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            let start = (r0 + i) * self.cols + c0;
            self.data[start..start + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// max |(U†U − I)_{ij}|.
    pub fn unitarity_defect(&self) -> f64 {
        match self.adjoint_matmul(self) {
            Ok(g) => g.sub(&Self::identity(self.cols)).map(|d| d.max_abs()).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_defect() <= tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
