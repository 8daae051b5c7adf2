use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix_core::spectral::EigenMethod;
use crate::matrix_core::SymmetricMatrix;

/// Stopping tolerances and the penalty schedule.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveConfig {
    /// Bound on the relative objective progress.
    pub eps1: f64,
    /// Bound on the normalized rank residual.
    pub eps2: f64,
    /// Absolute rank-residual threshold; defaults to `1e-8·max(1, ‖D⁰‖²)`.
    pub eps_g: Option<f64>,
    /// Initial penalty; defaults to the mean squared weight over pairs.
    pub rho0: Option<f64>,
    pub rho_growth: f64,
    pub min_iters: usize,
    pub max_iters: usize,
    pub eigen_method: EigenMethod,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            eps1: 1e-3,
            eps2: 1e-3,
            eps_g: None,
            rho0: None,
            rho_growth: 1.25,
            min_iters: 10,
            max_iters: 1000,
            eigen_method: EigenMethod::Auto,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("eps1", self.eps1)?;
        positive("eps2", self.eps2)?;
        if let Some(e) = self.eps_g {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(Error::InvalidConfig(format!("eps_g must be nonnegative, got {e}")));
            }
        }
        if let Some(r) = self.rho0 {
            positive("rho0", r)?;
        }
        if !(self.rho_growth > 1.0 && self.rho_growth.is_finite()) {
            return Err(Error::InvalidConfig(format!("rho growth must exceed 1, got {}", self.rho_growth)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.min_iters > self.max_iters {
            return Err(Error::InvalidConfig(format!(
                "min_iters ({}) exceeds max_iters ({})",
                self.min_iters, self.max_iters
            )));
        }
        Ok(())
    }

    pub(crate) fn resolved_eps_g(&self, d0: &SymmetricMatrix) -> f64 {
        self.eps_g.unwrap_or_else(|| 1e-8 * d0.norm_sq().max(1.0))
    }

    pub(crate) fn resolved_rho0(&self, weights: &SymmetricMatrix) -> f64 {
        self.rho0.unwrap_or_else(|| {
            let mut sum = 0.0;
            weights.for_each_pair(|_, _, w| sum += w * w);
            let mean = sum / weights.pair_count() as f64;
            if mean > 0.0 {
                mean
            } else {
                1.0
            }
        })
    }
}

/// Source of wall-clock seconds, so the core stays free of `std`.
pub trait Clock {
    fn seconds(&self) -> f64;
}

/// Reports zero for every reading.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn seconds(&self) -> f64 {
        0.0
    }
}

/// One solved subproblem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    pub iteration: usize,
    pub rho: f64,
    /// `f` at the new iterate.
    pub f: f64,
    /// `g` at the new iterate.
    pub g: f64,
    /// `f + ρg` before and after the step, with the same `ρ`.
    pub penalized_before: f64,
    pub penalized_after: f64,
    pub fprog: f64,
    pub kprog: f64,
    pub t_sub: f64,
    pub t_eig: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Termination {
    /// Both progress measures fell below their bounds.
    Converged,
    /// The rank residual reached `eps_g`.
    Residual,
    MaxIters,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::Residual => "residual",
            Termination::MaxIters => "max_iters",
        }
    }
}

impl core::fmt::Display for Termination {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: SymmetricMatrix,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
    pub termination: Termination,
    pub rho_final: f64,
    pub f_final: f64,
    pub g_final: f64,
    pub eps_g: f64,
    /// Seconds spent building the starting matrix.
    pub t_init: f64,
    /// Seconds in eigensolves, including the one at the starting point.
    pub t_eig: f64,
    pub t_sub: f64,
    pub t_total: f64,
}
