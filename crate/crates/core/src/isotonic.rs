//! Isotonic regression along a chain with a zero floor:
//!
//! ```text
//! minimize ½ Σ h_k² (x_k − y_k)²   subject to   x_1 >= x_2 >= ... >= x_m >= 0
//! ```
//!
//! Solved by pool-adjacent-violators on a block stack, followed by clamping
//! at zero. Adjacent blocks are merged only on a strict violation, so
//! plateaus stay as separate blocks.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest instance the brute-force oracle accepts.
pub const ORACLE_MAX_LEN: usize = 14;

/// Targets `y` with positive weights `h`; the objective weighs by `h²`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotonicInstance {
    targets: Vec<f64>,
    weights: Vec<f64>,
}

impl IsotonicInstance {
    pub fn new(targets: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::EmptyInput);
        }
        if weights.len() != targets.len() {
            return Err(Error::DimensionMismatch { expected: targets.len(), found: weights.len() });
        }
        if let Some(k) = weights.iter().position(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::NonPositiveWeight(k));
        }
        Ok(Self { targets, weights })
    }

    pub fn unweighted(targets: Vec<f64>) -> Result<Self> {
        let m = targets.len();
        Self::new(targets, vec![1.0; m])
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// `½ Σ h² (x − y)²`
    pub fn objective(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .zip(&self.targets)
            .zip(&self.weights)
            .map(|((xi, yi), hi)| hi * hi * (xi - yi) * (xi - yi))
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy)]
struct Block {
    weight: f64,
    weighted_sum: f64,
    len: usize,
}

impl Block {
    #[inline]
    fn mean(&self) -> f64 {
        self.weighted_sum / self.weight
    }
}

/// Reusable block stack for repeated solves of the same length.
#[derive(Debug, Default, Clone)]
pub struct PavaWorkspace {
    blocks: Vec<Block>,
}

impl PavaWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves into `out`. `squared_weights` holds `h²`; `None` means unit weights.
    /// Lengths are not checked beyond debug assertions.
    pub fn solve_into(&mut self, targets: &[f64], squared_weights: Option<&[f64]>, out: &mut [f64]) {
        debug_assert_eq!(targets.len(), out.len());
        self.blocks.clear();
        for (k, &y) in targets.iter().enumerate() {
            let w = squared_weights.map_or(1.0, |h2| h2[k]);
            let mut current = Block { weight: w, weighted_sum: w * y, len: 1 };
            while let Some(prev) = self.blocks.last() {
                if prev.mean() < current.mean() {
                    current.weight += prev.weight;
                    current.weighted_sum += prev.weighted_sum;
                    current.len += prev.len;
                    self.blocks.pop();
                } else {
                    break;
                }
            }
            self.blocks.push(current);
        }
        let mut k = 0;
        for b in &self.blocks {
            let v = b.mean().max(0.0);
            out[k..k + b.len].iter_mut().for_each(|x| *x = v);
            k += b.len;
        }
    }
}

/// Unit-weight chain regression.
pub fn pava_nonincreasing(targets: &[f64]) -> Result<Vec<f64>> {
    if targets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = vec![0.0; targets.len()];
    PavaWorkspace::new().solve_into(targets, None, &mut out);
    Ok(out)
}

/// Weighted chain regression; block values are `Σ h² y / Σ h²`.
pub fn pava_weighted(inst: &IsotonicInstance) -> Result<Vec<f64>> {
    let squared: Vec<f64> = inst.weights.iter().map(|h| h * h).collect();
    let mut out = vec![0.0; inst.len()];
    PavaWorkspace::new().solve_into(&inst.targets, Some(&squared), &mut out);
    Ok(out)
}

/// Exact minimizer by enumerating all `2^(m−1)` splittings of the chain into
/// consecutive blocks. Each block takes its clamped weighted mean; candidates
/// violating the chain are discarded.
pub fn oracle_exact(inst: &IsotonicInstance) -> Result<Vec<f64>> {
    let m = inst.len();
    if m > ORACLE_MAX_LEN {
        return Err(Error::OracleTooLarge { len: m, max: ORACLE_MAX_LEN });
    }
    let h2: Vec<f64> = inst.weights.iter().map(|h| h * h).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut candidate = vec![0.0; m];
    for cuts in 0u32..(1u32 << (m - 1)) {
        let mut start = 0;
        for end in 1..=m {
            // bit (end-1) set means a block boundary after position end-1
            if end == m || cuts & (1 << (end - 1)) != 0 {
                let w: f64 = h2[start..end].iter().sum();
                let s: f64 = h2[start..end].iter().zip(&inst.targets[start..end]).map(|(a, b)| a * b).sum();
                let v = (s / w).max(0.0);
                candidate[start..end].iter_mut().for_each(|x| *x = v);
                start = end;
            }
        }
        if candidate.windows(2).any(|p| p[0] < p[1]) {
            continue;
        }
        let obj = inst.objective(&candidate);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, candidate.clone()));
        }
    }
    // the all-in-one-block candidate is always feasible
    Ok(best.map(|(_, x)| x).unwrap_or(candidate))
}
