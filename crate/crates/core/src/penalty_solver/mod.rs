//! Majorized penalty method for rank-constrained EDM fitting under a full
//! ordinal chain.
//!
//! The rank constraint enters as `ρ·g(D)`. Each iteration replaces `g` by its
//! linear majorant at the current iterate, which turns the subproblem into a
//! weighted isotonic regression along the chain with weights `W² + ρ` and
//! targets `(W²Δ² − ρY)/(W² + ρ)`, `Y = Π(−Dᵏ)`. The penalty grows by a fixed
//! factor while the normalized rank residual stays above its bound.

mod config;
mod instance;
mod solve;

pub use config::{Clock, NoClock, SolveConfig, SolveReport, Termination, TraceEntry};
pub use instance::ProblemInstance;
pub use solve::{
    initial_guess, majorant, majorized_subproblem, objective, penalized_objective, solve, solve_observed, solve_with_clock,
};
