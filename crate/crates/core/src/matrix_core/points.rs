use alloc::vec;
use alloc::vec::Vec;

use super::SymmetricMatrix;
use crate::error::{Error, Result};

/// `count` points in `R^dim`, stored column per point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointCloud {
    dim: usize,
    count: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn zeros(dim: usize, count: usize) -> Result<Self> {
        Self::new(dim, count, vec![0.0; dim * count])
    }

    /// `coords[i * dim + k]` is coordinate `k` of point `i`.
    pub fn new(dim: usize, count: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(Error::InvalidInstance("point cloud needs dim >= 1 and count >= 1".into()));
        }
        if coords.len() != dim * count {
            return Err(Error::DimensionMismatch { expected: dim * count, found: coords.len() });
        }
        Ok(Self { dim, count, coords })
    }

    /// Builds from `dim` rows of `count` coordinates (the on-disk layout).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let count = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != count) {
            return Err(Error::InvalidInstance("ragged coordinate rows".into()));
        }
        let mut coords = vec![0.0; dim * count];
        for (k, row) in rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                coords[i * dim + k] = v;
            }
        }
        Self::new(dim, count, coords)
    }

    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, points.len(), coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn point_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    /// `dim` rows of `count` coordinates.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|k| (0..self.count).map(|i| self.point(i)[k]).collect()).collect()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for i in 0..self.count {
            crate::math::axpy(1.0, self.point(i), &mut c);
        }
        c.iter_mut().for_each(|v| *v /= self.count as f64);
        c
    }

    pub fn translate(&mut self, shift: &[f64]) {
        assert_eq!(shift.len(), self.dim);
        for i in 0..self.count {
            crate::math::axpy(1.0, shift, self.point_mut(i));
        }
    }

    /// Copy with the dimension raised to `dim` by zero padding.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: dim });
        }
        let mut out = Self::zeros(dim, self.count)?;
        for i in 0..self.count {
            out.point_mut(i)[..self.dim].copy_from_slice(self.point(i));
        }
        Ok(out)
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        crate::math::sqrt(self.squared_distance(i, j))
    }

    /// Squared-distance matrix `D_ij = ‖x_i − x_j‖²`.
    pub fn edm(&self) -> Result<SymmetricMatrix> {
        SymmetricMatrix::from_fn(self.count, |i, j| if i == j { 0.0 } else { self.squared_distance(i, j) })
    }
}
