use alloc::format;

use crate::error::{Error, Result};
use crate::feasibility::OrdinalChain;
use crate::matrix_core::{PointCloud, SymmetricMatrix};

/// Raw dissimilarities `δ`, weights `W`, the ordinal chain and the target
/// embedding dimension. The solver fits squared distances to `δ∘δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    delta: SymmetricMatrix,
    weights: SymmetricMatrix,
    chain: OrdinalChain,
    rank: usize,
    truth: Option<PointCloud>,
}

impl ProblemInstance {
    pub fn new(
        delta: SymmetricMatrix,
        weights: SymmetricMatrix,
        chain: OrdinalChain,
        rank: usize,
        truth: Option<PointCloud>,
    ) -> Result<Self> {
        let n = delta.n();
        if weights.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: weights.n() });
        }
        if chain.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: chain.n() });
        }
        if rank == 0 || rank >= n {
            return Err(Error::RankOutOfRange { rank, max: n - 1 });
        }
        if let Some(x) = &truth {
            if x.count() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.count() });
            }
        }
        for i in 0..n {
            if delta.get(i, i) != 0.0 {
                return Err(Error::InvalidInstance(format!("dissimilarity diagonal entry {i} is nonzero")));
            }
        }
        let mut bad = None;
        delta.for_each_pair(|i, j, d| {
            let w = weights.get(i, j);
            if bad.is_some() {
                return;
            }
            if !(d.is_finite() && d >= 0.0) {
                bad = Some(format!("dissimilarity ({i}, {j}) = {d} is not a nonnegative real"));
            } else if !(w.is_finite() && w >= 0.0) {
                bad = Some(format!("weight ({i}, {j}) = {w} is not a nonnegative real"));
            } else if (w > 0.0) != (d > 0.0) {
                bad = Some(format!("weight ({i}, {j}) = {w} disagrees with observation state of dissimilarity {d}"));
            }
        });
        if let Some(msg) = bad {
            return Err(Error::InvalidInstance(msg));
        }
        Ok(Self { delta, weights, chain, rank, truth })
    }

    /// Weight 1 on every positive dissimilarity, 0 elsewhere.
    pub fn with_binary_weights(
        delta: SymmetricMatrix,
        chain: OrdinalChain,
        rank: usize,
        truth: Option<PointCloud>,
    ) -> Result<Self> {
        let weights = delta.map(|d| if d > 0.0 { 1.0 } else { 0.0 });
        Self::new(delta, weights, chain, rank, truth)
    }

    pub fn n(&self) -> usize {
        self.delta.n()
    }

    pub fn delta(&self) -> &SymmetricMatrix {
        &self.delta
    }

    pub fn weights(&self) -> &SymmetricMatrix {
        &self.weights
    }

    pub fn chain(&self) -> &OrdinalChain {
        &self.chain
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truth(&self) -> Option<&PointCloud> {
        self.truth.as_ref()
    }

    pub fn with_rank(mut self, rank: usize) -> Result<Self> {
        if rank == 0 || rank >= self.n() {
            return Err(Error::RankOutOfRange { rank, max: self.n() - 1 });
        }
        self.rank = rank;
        Ok(self)
    }

    pub fn with_chain(mut self, chain: OrdinalChain) -> Result<Self> {
        if chain.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: chain.n() });
        }
        self.chain = chain;
        Ok(self)
    }

    /// `Δ∘Δ`, the squared dissimilarities the model fits.
    pub fn delta_sq(&self) -> SymmetricMatrix {
        self.delta.hadamard_square()
    }

    pub fn is_fully_observed(&self) -> bool {
        let mut all = true;
        self.delta.for_each_pair(|_, _, d| all &= d > 0.0);
        all
    }
}
