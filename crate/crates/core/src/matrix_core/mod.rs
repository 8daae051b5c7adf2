//! Symmetric-matrix primitives: centering, partial spectral decomposition,
//! projection onto the rank-cut conditional PSD cone, the rank residual and
//! classical MDS.

mod cone;
mod points;
pub mod spectral;
mod symmetric;

pub use cone::{
    center, classical_mds, kprog, leading_psd_part, leading_psd_part_with, project_rank_cone,
    project_rank_cone_with, rank_residual, rank_residual_with, ConeProjection,
};
pub(crate) use cone::{assemble_projection, kprog_from_parts};
pub use points::PointCloud;
pub use spectral::{all_eigenpairs, leading_eigenpairs, EigenMethod, SpectralPairs};
pub use symmetric::SymmetricMatrix;
