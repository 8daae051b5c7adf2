//! Symmetric eigensolvers returning the algebraically largest eigenpairs.
//!
//! Small matrices go through a dense decomposition. Large ones with few
//! wanted pairs use a restarted block Krylov iteration with explicit
//! Rayleigh-Ritz, which only needs matrix-vector products and accepts the
//! previous call's vectors as a warm start.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::math::{axpy, dot, norm};

/// Orders above this use the Krylov solver when few pairs are wanted.
pub const KRYLOV_MIN_ORDER: usize = 200;

const ORTHONORMAL_TOL: f64 = 1e-10;

/// Leading eigenpairs `λ_1 >= ... >= λ_k` with orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPairs {
    n: usize,
    values: Vec<f64>,
    // column-major, n x values.len()
    vectors: Vec<f64>,
}

impl SpectralPairs {
    #[inline]
    pub fn count(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// Largest deviation of the Gram matrix of the vectors from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.count() {
            for b in a..self.count() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(self.vector(a), self.vector(b)) - target).abs());
            }
        }
        worst
    }

    fn truncated(mut self, count: usize) -> Self {
        self.values.truncate(count);
        self.vectors.truncate(count * self.n);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EigenMethod {
    /// Dense below [`KRYLOV_MIN_ORDER`], Krylov above when `count <= n / 4`.
    #[default]
    Auto,
    Dense,
    Krylov,
}

impl EigenMethod {
    fn use_krylov(self, n: usize, count: usize) -> bool {
        match self {
            EigenMethod::Dense => false,
            EigenMethod::Krylov => count < n,
            EigenMethod::Auto => n > KRYLOV_MIN_ORDER && 4 * count <= n,
        }
    }
}

/// All eigenpairs, sorted nonincreasing.
pub fn all_eigenpairs(a: &SymmetricMatrix) -> Result<SpectralPairs> {
    dense_eigenpairs(a.n(), &a.to_dense())
}

/// The `count` algebraically largest eigenpairs.
pub fn leading_eigenpairs(a: &SymmetricMatrix, count: usize, method: EigenMethod) -> Result<SpectralPairs> {
    leading_eigenpairs_warm(a, count, method, None)
}

/// As [`leading_eigenpairs`], seeding the Krylov solver with `warm` when given.
pub fn leading_eigenpairs_warm(
    a: &SymmetricMatrix,
    count: usize,
    method: EigenMethod,
    warm: Option<&SpectralPairs>,
) -> Result<SpectralPairs> {
    let n = a.n();
    let count = count.min(n);
    let dense = a.to_dense();
    if count == 0 {
        return Ok(SpectralPairs { n, values: Vec::new(), vectors: Vec::new() });
    }
    if method.use_krylov(n, count) {
        let pairs = krylov_leading(&dense, n, count, warm.filter(|w| w.order() == n))?;
        if pairs.orthonormality_error() <= ORTHONORMAL_TOL {
            return Ok(pairs);
        }
    }
    Ok(dense_eigenpairs(n, &dense)?.truncated(count))
}

fn dense_eigenpairs(n: usize, dense: &[f64]) -> Result<SpectralPairs> {
    let max_iter = 64 * n.max(8);
    let m = DMatrix::from_row_slice(n, n, dense);
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, max_iter)
        .ok_or(Error::EigenNoConvergence { iterations: max_iter })?;
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep the solver's order
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        values.push(eig.eigenvalues[k]);
        vectors.extend(eig.eigenvectors.column(k).iter().copied());
    }
    Ok(SpectralPairs { n, values, vectors })
}

/// Deterministic pseudo-random start vectors (splitmix64).
struct StartVectors {
    state: u64,
}

impl StartVectors {
    fn next_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
                let mut z = self.state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
                z ^= z >> 31;
                (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect()
    }
}

/// Two-pass Gram-Schmidt of `v` against `basis`; returns the normalized
/// remainder unless it is numerically contained in the span.
fn orthonormalize(basis: &[Vec<f64>], extra: &[Vec<f64>], mut v: Vec<f64>) -> Option<Vec<f64>> {
    let original = norm(&v);
    if !(original > 0.0) || !original.is_finite() {
        return None;
    }
    for _ in 0..2 {
        for b in basis.iter().chain(extra) {
            let c = dot(b, &v);
            axpy(-c, b, &mut v);
        }
    }
    let remaining = norm(&v);
    if remaining <= 1e-10 * original {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= remaining);
    Some(v)
}

fn block_matvec(a: &[f64], n: usize, vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; n]; vs.len()];
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        for (o, v) in out.iter_mut().zip(vs) {
            o[i] = dot(row, v);
        }
    }
    out
}

/// Linear combination `Σ_j coeffs[j] * vs[j]`.
fn combine(vs: &[Vec<f64>], coeffs: impl Iterator<Item = f64>, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (v, c) in vs.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

fn krylov_leading(a: &[f64], n: usize, want: usize, warm: Option<&SpectralPairs>) -> Result<SpectralPairs> {
    const TOL: f64 = 1e-9;
    const MAX_ITERS: usize = 2000;

    let extended = (want + 2).min(n);
    let max_basis = n.min((4 * extended).max(extended + 24));
    let keep_on_restart = extended.max(max_basis / 2);

    let mut seeds = StartVectors { state: 0x2545_F491_4F6C_DD1D };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    // projected matrix Vᵀ A V, grown by rows as the basis grows
    let mut projected: Vec<Vec<f64>> = Vec::with_capacity(max_basis);

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    if let Some(w) = warm {
        candidates.extend((0..w.count().min(extended)).map(|k| w.vector(k).to_vec()));
    }
    while candidates.len() < extended {
        candidates.push(seeds.next_vector(n));
    }

    for iter in 0..MAX_ITERS {
        let mut fresh = Vec::new();
        for c in candidates.drain(..) {
            if let Some(q) = orthonormalize(&basis, &fresh, c) {
                fresh.push(q);
            }
        }
        let mut attempts = 0;
        while fresh.is_empty() && basis.len() < n && attempts < 8 {
            if let Some(q) = orthonormalize(&basis, &fresh, seeds.next_vector(n)) {
                fresh.push(q);
            }
            attempts += 1;
        }
        images.extend(block_matvec(a, n, &fresh));
        basis.extend(fresh);

        let k = basis.len();
        for j in projected.len()..k {
            let row: Vec<f64> =
                (0..=j).map(|i| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]))).collect();
            projected.push(row);
        }
        let h = DMatrix::<f64>::from_fn(k, k, |i, j| if i <= j { projected[j][i] } else { projected[i][j] });
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 64 * k.max(8))
            .ok_or(Error::EigenNoConvergence { iterations: iter })?;
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
        let scale = eig.eigenvalues.iter().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));

        let tracked = extended.min(k);
        let mut ritz = Vec::with_capacity(tracked);
        let mut residuals = Vec::with_capacity(tracked);
        let mut converged = true;
        for (slot, &col) in order.iter().take(tracked).enumerate() {
            let s = eig.eigenvectors.column(col);
            let y = combine(&basis, s.iter().copied(), n);
            let mut r = combine(&images, s.iter().copied(), n);
            let theta = eig.eigenvalues[col];
            axpy(-theta, &y, &mut r);
            let rn = norm(&r);
            if slot < want && rn > TOL * scale {
                converged = false;
            }
            ritz.push((theta, y));
            residuals.push((rn, r));
        }

        if converged || k >= n {
            if k < want {
                return Err(Error::EigenNoConvergence { iterations: iter });
            }
            let mut values = Vec::with_capacity(want);
            let mut vectors = Vec::with_capacity(want * n);
            for (theta, y) in ritz.into_iter().take(want) {
                values.push(theta);
                vectors.extend(y);
            }
            return Ok(SpectralPairs { n, values, vectors });
        }

        candidates = residuals
            .into_iter()
            .filter(|(rn, _)| *rn > TOL * scale)
            .map(|(_, r)| r)
            .collect();

        if k + candidates.len() > max_basis {
            let keep = keep_on_restart.min(k);
            let mut new_basis = Vec::with_capacity(max_basis);
            let mut new_images = Vec::with_capacity(max_basis);
            projected.clear();
            for (slot, &col) in order.iter().take(keep).enumerate() {
                let s = eig.eigenvectors.column(col);
                new_basis.push(combine(&basis, s.iter().copied(), n));
                new_images.push(combine(&images, s.iter().copied(), n));
                let mut row = vec![0.0; slot + 1];
                row[slot] = eig.eigenvalues[col];
                projected.push(row);
            }
            basis = new_basis;
            images = new_images;
        }
    }
    Err(Error::EigenNoConvergence { iterations: MAX_ITERS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
        let mut g = StartVectors { state: seed };
        let v = g.next_vector(n * n);
        SymmetricMatrix::from_fn(n, |i, j| v[i * n + j] + v[j * n + i]).unwrap()
    }

    #[test]
    fn dense_pairs_sorted_and_orthonormal() {
        let a = random_symmetric(12, 3);
        let p = all_eigenpairs(&a).unwrap();
        assert!(p.values().windows(2).all(|w| w[0] >= w[1]));
        assert!(p.orthonormality_error() < 1e-10);
        let mut av = vec![0.0; 12];
        for k in 0..12 {
            a.mul_vec(p.vector(k), &mut av);
            axpy(-p.values()[k], p.vector(k), &mut av);
            assert!(norm(&av) < 1e-10);
        }
    }

    #[test]
    fn krylov_matches_dense() {
        for (n, want, seed) in [(60, 3, 1), (150, 10, 2), (301, 2, 9)] {
            let a = random_symmetric(n, seed);
            let dense = leading_eigenpairs(&a, want, EigenMethod::Dense).unwrap();
            let kry = leading_eigenpairs(&a, want, EigenMethod::Krylov).unwrap();
            for k in 0..want {
                let scale = dense.values()[0].abs();
                assert!((dense.values()[k] - kry.values()[k]).abs() < 1e-9 * scale, "n={n} k={k}");
                let overlap = dot(dense.vector(k), kry.vector(k)).abs();
                assert!((overlap - 1.0).abs() < 1e-6, "n={n} k={k} overlap={overlap}");
            }
        }
    }

    #[test]
    fn krylov_handles_repeated_leading_eigenvalue() {
        // I + 2 * (u u^T + v v^T): eigenvalue 3 with multiplicity two.
        let n = 80;
        let mut g = StartVectors { state: 11 };
        let basis = orthonormalize(&[], &[], g.next_vector(n)).unwrap();
        let second = orthonormalize(&[basis.clone()], &[], g.next_vector(n)).unwrap();
        let a = SymmetricMatrix::from_fn(n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            id + 2.0 * (basis[i] * basis[j] + second[i] * second[j])
        })
        .unwrap();
        let p = leading_eigenpairs(&a, 2, EigenMethod::Krylov).unwrap();
        assert!((p.values()[0] - 3.0).abs() < 1e-9);
        assert!((p.values()[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn krylov_warm_start_converges() {
        let a = random_symmetric(250, 5);
        let first = leading_eigenpairs(&a, 4, EigenMethod::Krylov).unwrap();
        let b = a.zip_with(&random_symmetric(250, 6), |x, y| x + 1e-3 * y);
        let cold = leading_eigenpairs(&b, 4, EigenMethod::Dense).unwrap();
        let warm = leading_eigenpairs_warm(&b, 4, EigenMethod::Krylov, Some(&first)).unwrap();
        for k in 0..4 {
            assert!((cold.values()[k] - warm.values()[k]).abs() < 1e-9 * cold.values()[0].abs());
        }
    }

    #[test]
    fn zero_matrix_has_zero_pairs() {
        let z = SymmetricMatrix::zeros(300).unwrap();
        let p = leading_eigenpairs(&z, 3, EigenMethod::Krylov).unwrap();
        assert_eq!(p.values(), &[0.0, 0.0, 0.0]);
    }
}
