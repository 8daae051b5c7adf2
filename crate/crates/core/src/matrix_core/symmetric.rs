use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense real symmetric matrix of order `n >= 2`.
///
/// Only the upper triangle (diagonal included) is stored, row by row, so
/// `get(i, j)` and `get(j, i)` always read the same cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        Ok(Self { n, data: vec![0.0; packed_len(n)] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Builds the matrix from `f(i, j)`, evaluated once for every `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m.data[k] = f(i, j);
                k += 1;
            }
        }
        Ok(m)
    }

    /// Builds from a row-major square array, rejecting asymmetry larger than `tol`.
    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !((rows[i][j] - rows[j][i]).abs() <= tol) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    /// Builds from the packed upper triangle (row by row, diagonal included).
    pub fn from_packed(n: usize, data: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        if data.len() != packed_len(n) {
            return Err(Error::DimensionMismatch { expected: packed_len(n), found: data.len() });
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of strictly upper-triangular entries, `n(n-1)/2`.
    #[inline]
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Offset of `(i, j)` in the packed storage.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(j < self.n);
        i * (2 * self.n - i + 1) / 2 + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn packed(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn packed_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Full row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                out[i * n + j] = self.data[k];
                out[j * n + i] = self.data[k];
                k += 1;
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Visits every strictly upper-triangular entry as `(i, j, value)`.
    pub fn for_each_pair(&self, mut f: impl FnMut(usize, usize, f64)) {
        let mut k = 0;
        for i in 0..self.n {
            k += 1; // skip diagonal
            for j in (i + 1)..self.n {
                f(i, j, self.data[k]);
                k += 1;
            }
        }
    }

    /// Frobenius inner product `⟨A, B⟩` over the full matrix.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "order mismatch");
        let mut diag = 0.0;
        let mut off = 0.0;
        let mut k = 0;
        for i in 0..self.n {
            diag += self.data[k] * other.data[k];
            k += 1;
            for _ in (i + 1)..self.n {
                off += self.data[k] * other.data[k];
                k += 1;
            }
        }
        diag + 2.0 * off
    }

    /// Squared Frobenius norm over the full matrix.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        crate::math::sqrt(self.norm_sq())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest strictly off-diagonal entry.
    pub fn max_offdiag(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        self.for_each_pair(|_, _, v| best = best.max(v));
        best
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.map(|v| alpha * v)
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Entrywise combination `f(self_ij, other_ij)`.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "order mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Hadamard square `A∘A`.
    pub fn hadamard_square(&self) -> Self {
        self.map(|v| v * v)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.n;
        let mut sums = vec![0.0; n];
        let mut k = 0;
        for i in 0..n {
            sums[i] += self.data[k];
            k += 1;
            for j in (i + 1)..n {
                let v = self.data[k];
                sums[i] += v;
                sums[j] += v;
                k += 1;
            }
        }
        sums
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut k = 0;
        for i in 0..self.n {
            y[i] += self.data[k] * x[i];
            k += 1;
            let xi = x[i];
            let mut acc = 0.0;
            for j in (i + 1)..self.n {
                let a = self.data[k];
                acc += a * x[j];
                y[j] += a * xi;
                k += 1;
            }
            y[i] += acc;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
