//! Small dense complex matrices.
//!
//! Every operator in this crate is at most a few hundred rows wide, so a
//! plain `ndarray` backing store is all we need. Comparisons use the entrywise
//! max-norm throughout.

use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

/// Global comparison tolerance for exact identities.
pub const TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { data: Array2::zeros((rows, cols)) }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: Array2::eye(n) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { data: Array2::from_shape_fn((rows, cols), |(i, j)| f(i, j)) }
    }

    /// Builds a matrix from row slices; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let m = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|c| c.len() == n), "ragged columns");
        Self::from_fn(n, m, |i, j| cols[j][i])
    }

    pub fn sigma1() -> Self {
        Self::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]])
    }

    pub fn sigma3() -> Self {
        Self::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]])
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[(i, j)] = v;
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.data.column(j).to_vec()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data.row(i).to_vec()
    }

    pub fn dagger(&self) -> Self {
        Self { data: self.data.t().mapv(|z| z.conj()) }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.t().to_owned() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.rows(), "matmul shape mismatch");
        Self { data: self.data.dot(&other.data) }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len(), "matrix-vector shape mismatch");
        self.data.rows().into_iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { data: self.data.mapv(|z| z * k) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.data.dim(), other.data.dim(), "shape mismatch");
        Self { data: &self.data - &other.data }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.data.dim(), other.data.dim(), "shape mismatch");
        self.data.iter().zip(other.data.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖M†M − Id‖_max`; zero for an isometry.
    pub fn isometry_defect(&self) -> f64 {
        self.dagger().matmul(self).max_abs_diff(&Self::identity(self.cols()))
    }

    /// `‖M†M − Id‖_max`, or infinity for a non-square matrix.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.isometry_defect()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = (self.rows(), self.cols());
        let mut out = Self::zeros(r1 + other.rows(), c1 + other.cols());
        out.data.slice_mut(s![..r1, ..c1]).assign(&self.data);
        out.data.slice_mut(s![r1.., c1..]).assign(&other.data);
        out
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows(), other.cols());
        Self::from_fn(self.rows() * r2, self.cols() * c2, |i, j| {
            self.data[(i / r2, j / c2)] * other.data[(i % r2, j % c2)]
        })
    }

    /// `⊕_n self`.
    pub fn direct_power(&self, n: usize) -> Self {
        let mut out = Self::zeros(self.rows() * n, self.cols() * n);
        for k in 0..n {
            out.data
                .slice_mut(s![k * self.rows()..(k + 1) * self.rows(), k * self.cols()..(k + 1) * self.cols()])
                .assign(&self.data);
        }
        out
    }

    /// `⊗_n self`.
    pub fn tensor_power(&self, n: usize) -> Self {
        let mut out = Self::identity(1);
        for _ in 0..n {
            out = out.kron(self);
        }
        out
    }
}

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_matrices_are_unitary_and_hermitian() {
        for m in [ComplexMatrix::sigma1(), ComplexMatrix::sigma3()] {
            assert!(m.is_unitary(TOL));
            assert_eq!(m.dagger(), m);
        }
    }

    #[test]
    fn kron_matches_index_convention() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]]);
        let b = ComplexMatrix::sigma1();
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        // (i, j) = (1, 2): a[0][1] * b[1][0]
        assert_eq!(k.get(1, 2), c(2.0, 0.0));
        assert_eq!(k.get(3, 0), c(3.0, 0.0));
        assert_eq!(k.get(2, 2), ZERO);
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let s = ComplexMatrix::sigma1().direct_sum(&ComplexMatrix::identity(1));
        assert_eq!(s.rows(), 3);
        assert_eq!(s.get(0, 1), ONE);
        assert_eq!(s.get(2, 2), ONE);
        assert_eq!(s.get(0, 2), ZERO);
        assert!(s.is_unitary(TOL));
    }

    #[test]
    fn non_square_is_never_unitary() {
        let e = ComplexMatrix::from_columns(&[vec![ONE, ZERO, ZERO]]);
        assert!(!e.is_unitary(TOL));
        assert!(e.isometry_defect() < TOL);
    }

    #[test]
    fn mul_vec_agrees_with_matmul() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64, j as f64 + 1.0));
        let v = vec![c(0.5, -1.0), c(2.0, 0.25)];
        let col = ComplexMatrix::from_columns(&[v.clone()]);
        assert!(max_abs_diff(&m.mul_vec(&v), &m.matmul(&col).column(0)) < TOL);
    }
}
