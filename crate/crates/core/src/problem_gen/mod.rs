//! Test problems: random sensor networks in a box, rankings extracted from a
//! distance matrix, observation density, and shortest-path completion of
//! partially observed dissimilarities.

mod paths;

use alloc::format;
use alloc::vec::Vec;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::feasibility::OrdinalChain;
use crate::matrix_core::{PointCloud, SymmetricMatrix};
use crate::penalty_solver::ProblemInstance;

pub use paths::shortest_path_completion;

/// Sensor-network instance parameters.
///
/// Points are uniform in `[−half_width, half_width]^dim`. A pair is observed
/// when its true distance is at most `radio_range`, and then
/// `δ = d·|1 + ε·noise_factor|` with `ε` standard normal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SnlConfig {
    pub n: usize,
    pub half_width: f64,
    pub radio_range: f64,
    pub noise_factor: f64,
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    /// Rank the pairs by the observed `δ∘δ` instead of the true EDM.
    pub chain_from_delta: bool,
}

impl SnlConfig {
    /// Unit square, planar points, embedding rank 2.
    pub fn new(n: usize, radio_range: f64, noise_factor: f64, seed: u64) -> Self {
        Self {
            n,
            half_width: 0.5,
            radio_range,
            noise_factor,
            seed,
            dim: 2,
            rank: 2,
            chain_from_delta: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::InvalidConfig(msg));
        if self.n < 3 {
            return fail(format!("n must be at least 3, got {}", self.n));
        }
        if !(self.radio_range > 0.0) {
            return fail(format!("radio range must be positive, got {}", self.radio_range));
        }
        if !(self.noise_factor >= 0.0 && self.noise_factor.is_finite()) {
            return fail(format!("noise factor must be nonnegative, got {}", self.noise_factor));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return fail(format!("region half-width must be positive, got {}", self.half_width));
        }
        if self.dim == 0 {
            return fail("point dimension must be at least 1".into());
        }
        if self.rank == 0 || self.rank >= self.n {
            return fail(format!("rank must lie in 1..={}, got {}", self.n - 1, self.rank));
        }
        Ok(())
    }
}

pub fn generate_snl(cfg: &SnlConfig) -> Result<ProblemInstance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hw = cfg.half_width;
    let mut truth = PointCloud::zeros(cfg.dim, cfg.n)?;
    for c in truth.coords_mut() {
        *c = rng.random_range(-hw..=hw);
    }
    let true_edm = truth.edm()?;
    let mut delta = SymmetricMatrix::zeros(cfg.n)?;
    for i in 0..cfg.n {
        for j in (i + 1)..cfg.n {
            let eps: f64 = StandardNormal.sample(&mut rng);
            let d = truth.distance(i, j);
            if d <= cfg.radio_range {
                delta.set(i, j, d * (1.0 + eps * cfg.noise_factor).abs());
            }
        }
    }
    let chain = if cfg.chain_from_delta {
        extract_chain(&delta.hadamard_square())
    } else {
        extract_chain(&true_edm)
    };
    ProblemInstance::with_binary_weights(delta, chain, cfg.rank, Some(truth))
}

/// Ranks all pairs by nonincreasing value, ties kept in lexicographic order.
pub fn extract_chain(d: &SymmetricMatrix) -> OrdinalChain {
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(d.pair_count());
    d.for_each_pair(|i, j, v| entries.push((i, j, v)));
    entries.sort_by(|a, b| b.2.total_cmp(&a.2));
    OrdinalChain::new(d.n(), entries.into_iter().map(|(i, j, _)| (i, j)).collect())
        .expect("every pair appears exactly once")
}

/// Fraction of nonzero entries of the full `n × n` dissimilarity matrix.
pub fn density(inst: &ProblemInstance) -> f64 {
    density_of(inst.delta())
}

pub fn density_of(delta: &SymmetricMatrix) -> f64 {
    let mut nonzero = 0usize;
    delta.for_each_pair(|_, _, v| nonzero += (v != 0.0) as usize);
    let n = delta.n() as f64;
    2.0 * nonzero as f64 / (n * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_chain() {
        let x = PointCloud::from_points(1, &[alloc::vec![0.0], alloc::vec![1.0], alloc::vec![3.0]]).unwrap();
        let c = extract_chain(&x.edm().unwrap());
        assert_eq!(c.to_one_based(), [(1, 3), (2, 3), (1, 2)]);
    }

    #[test]
    fn zero_matrix_gives_canonical_chain() {
        let z = SymmetricMatrix::zeros(5).unwrap();
        assert_eq!(extract_chain(&z), OrdinalChain::canonical(5).unwrap());
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = SnlConfig::new(30, 0.6, 0.1, 11);
        assert_eq!(generate_snl(&cfg).unwrap(), generate_snl(&cfg).unwrap());
        let other = SnlConfig { seed: 12, ..cfg.clone() };
        assert_ne!(generate_snl(&cfg).unwrap(), generate_snl(&other).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SnlConfig::new(2, 1.0, 0.1, 0).validate().is_err());
        assert!(SnlConfig::new(10, 0.0, 0.1, 0).validate().is_err());
        assert!(SnlConfig::new(10, 1.0, -0.1, 0).validate().is_err());
        assert!(SnlConfig::new(3, 1.0, 0.1, 0).validate().is_ok());
    }
}
