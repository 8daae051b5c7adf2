use alloc::vec::Vec;

use super::spectral::{leading_eigenpairs_warm, EigenMethod, SpectralPairs};
use super::{PointCloud, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::math::sqrt;

fn check_rank(rank: usize, max: usize) -> Result<()> {
    if rank == 0 || rank > max {
        return Err(Error::RankOutOfRange { rank, max });
    }
    Ok(())
}

/// `JAJ` with `J = I − eeᵀ/n`.
pub fn center(a: &SymmetricMatrix) -> SymmetricMatrix {
    let n = a.n();
    let nf = n as f64;
    let means: Vec<f64> = a.row_sums().into_iter().map(|s| s / nf).collect();
    let grand = means.iter().sum::<f64>() / nf;
    let mut out = a.clone();
    let data = out.packed_mut();
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            data[k] = data[k] - means[i] - means[j] + grand;
            k += 1;
        }
    }
    out
}

/// `Σ_{i<=r} max(0, λ_i) p_i p_iᵀ` over the `r` leading eigenpairs.
pub fn leading_psd_part(a: &SymmetricMatrix, rank: usize) -> Result<SymmetricMatrix> {
    leading_psd_part_with(a, rank, EigenMethod::Auto, None).map(|(m, _)| m)
}

pub fn leading_psd_part_with(
    a: &SymmetricMatrix,
    rank: usize,
    method: EigenMethod,
    warm: Option<&SpectralPairs>,
) -> Result<(SymmetricMatrix, SpectralPairs)> {
    check_rank(rank, a.n())?;
    let pairs = leading_eigenpairs_warm(a, rank, method, warm)?;
    Ok((psd_from_pairs(a.n(), &pairs)?, pairs))
}

fn psd_from_pairs(n: usize, pairs: &SpectralPairs) -> Result<SymmetricMatrix> {
    let mut out = SymmetricMatrix::zeros(n)?;
    for (c, &lambda) in pairs.values().iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let p = pairs.vector(c);
        let data = out.packed_mut();
        let mut k = 0;
        for i in 0..n {
            let s = lambda * p[i];
            for &pj in &p[i..] {
                data[k] += s * pj;
                k += 1;
            }
        }
    }
    Ok(out)
}

/// Projection of `A` onto the rank-cut conditional PSD cone, with the
/// quantities the solver reuses.
#[derive(Debug, Clone)]
pub struct ConeProjection {
    /// `PCA_r⁺(JAJ) + (A − JAJ)`
    pub projection: SymmetricMatrix,
    /// `½‖Π(A) − A‖²`, computed as `½‖PCA_r⁺(JAJ) − JAJ‖²` to avoid cancellation.
    pub half_gap_sq: f64,
    /// `‖JAJ‖²`
    pub centered_norm_sq: f64,
    pub pairs: SpectralPairs,
}

pub fn project_rank_cone(a: &SymmetricMatrix, rank: usize) -> Result<SymmetricMatrix> {
    project_rank_cone_with(a, rank, EigenMethod::Auto, None).map(|p| p.projection)
}

pub fn project_rank_cone_with(
    a: &SymmetricMatrix,
    rank: usize,
    method: EigenMethod,
    warm: Option<&SpectralPairs>,
) -> Result<ConeProjection> {
    check_rank(rank, a.n() - 1)?;
    let centered = center(a);
    let pairs = leading_eigenpairs_warm(&centered, rank, method, warm)?;
    assemble_projection(a, &centered, pairs)
}

/// Finishes a projection from `JAJ` and its leading eigenpairs.
pub(crate) fn assemble_projection(
    a: &SymmetricMatrix,
    centered: &SymmetricMatrix,
    pairs: SpectralPairs,
) -> Result<ConeProjection> {
    let psd = psd_from_pairs(a.n(), &pairs)?;
    let half_gap_sq = 0.5 * psd.sub(centered).norm_sq();
    let centered_norm_sq = centered.norm_sq();
    // psd + (a - centered)
    let mut projection = a.clone();
    for ((y, &p), &c) in projection.packed_mut().iter_mut().zip(psd.packed()).zip(centered.packed()) {
        *y = p + (*y - c);
    }
    Ok(ConeProjection { projection, half_gap_sq, centered_norm_sq, pairs })
}

/// `g(D) = ½‖D + Π(−D)‖²`; zero exactly when `−D` lies in the rank-cut cone.
pub fn rank_residual(d: &SymmetricMatrix, rank: usize) -> Result<f64> {
    rank_residual_with(d, rank, EigenMethod::Auto)
}

pub fn rank_residual_with(d: &SymmetricMatrix, rank: usize, method: EigenMethod) -> Result<f64> {
    project_rank_cone_with(&d.scaled(-1.0), rank, method, None).map(|p| p.half_gap_sq)
}

/// `2 g(D) / ‖JDJ‖²`, the normalized rank residual.
///
/// Fails with [`Error::DegenerateCentering`] when `JDJ` vanishes.
pub fn kprog(d: &SymmetricMatrix, rank: usize) -> Result<f64> {
    let p = project_rank_cone_with(&d.scaled(-1.0), rank, EigenMethod::Auto, None)?;
    kprog_from_parts(p.half_gap_sq, p.centered_norm_sq, d.norm_sq())
}

pub(crate) fn kprog_from_parts(g: f64, centered_norm_sq: f64, norm_sq: f64) -> Result<f64> {
    if centered_norm_sq <= 1e-28 * norm_sq || centered_norm_sq <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateCentering);
    }
    Ok((2.0 * g / centered_norm_sq).clamp(0.0, 1.0))
}

/// Classical MDS: coordinates `Diag(λ^½) P₁ᵀ` from the top eigenpairs of `−½JDJ`.
/// Nonpositive eigenvalues contribute zero coordinates.
pub fn classical_mds(d: &SymmetricMatrix, rank: usize) -> Result<PointCloud> {
    check_rank(rank, usize::MAX)?;
    let n = d.n();
    let b = center(d).scaled(-0.5);
    let pairs = leading_eigenpairs_warm(&b, rank.min(n), EigenMethod::Auto, None)?;
    let mut x = PointCloud::zeros(rank, n)?;
    for (k, &lambda) in pairs.values().iter().enumerate() {
        let s = sqrt(lambda.max(0.0));
        let v = pairs.vector(k);
        for i in 0..n {
            x.point_mut(i)[k] = s * v[i];
        }
    }
    Ok(x)
}
