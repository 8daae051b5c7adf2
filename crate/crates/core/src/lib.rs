//! Euclidean distance matrix optimization under full ordinal constraints.
//!
//! Given dissimilarities `Δ`, weights `W` and a total ranking of all pairwise
//! distances, the solver looks for an EDM `D` of embedding dimension at most
//! `r` that respects the ranking and minimizes `½‖W∘(D − Δ∘Δ)‖²`.
//!
//! The rank constraint is handled by penalizing the distance of `−D` to the
//! conditional positive semidefinite cone with rank cut; each majorized
//! subproblem is a weighted isotonic regression along the ranking, solved
//! exactly by pool-adjacent-violators.
//!
//! Layout:
//! - [`matrix_core`]: symmetric matrices, point clouds, eigensolvers, cone projection, cMDS.
//! - [`isotonic`]: nonincreasing nonnegative chain regression (plain and weighted) plus a brute-force oracle.
//! - [`feasibility`]: ordinal chains, relabelings and the constructive feasibility results.
//! - [`problem_gen`]: sensor-network instances, ranking extraction, shortest-path completion.
//! - [`penalty_solver`]: the majorized penalty iteration.
//! - [`postprocess`]: Procrustes alignment, stress refinement, RMSD.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock timing is injected
//! through [`penalty_solver::Clock`].

#![no_std]

extern crate alloc;

mod error;
mod math;

pub mod feasibility;
pub mod isotonic;
pub mod matrix_core;
pub mod penalty_solver;
pub mod postprocess;
pub mod problem_gen;

pub use error::{Error, Result};
pub use feasibility::{OrdinalChain, PermutationMap};
pub use isotonic::IsotonicInstance;
pub use matrix_core::{PointCloud, SpectralPairs, SymmetricMatrix};
pub use penalty_solver::{ProblemInstance, SolveConfig, SolveReport};
pub use problem_gen::SnlConfig;
