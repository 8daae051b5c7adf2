use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix_core::SymmetricMatrix;

/// A total ranking of all `n(n−1)/2` off-diagonal pairs, read as
/// `D[p_1] >= D[p_2] >= ... >= D[p_m]`.
///
/// Pairs are zero-based with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalChain {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl OrdinalChain {
    /// Validates that `pairs` is a permutation of the canonical pair list.
    /// Pairs given as `(j, i)` with `j > i` are normalized.
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidChain(format!("need n >= 2, got {n}")));
        }
        let m = n * (n - 1) / 2;
        if pairs.len() != m {
            return Err(Error::InvalidChain(format!("expected {m} pairs for n = {n}, got {}", pairs.len())));
        }
        let mut seen = vec![false; n * n];
        let mut normalized = Vec::with_capacity(m);
        for (pos, &(a, b)) in pairs.iter().enumerate() {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j || j >= n {
                return Err(Error::InvalidChain(format!("pair ({a}, {b}) at position {pos} is not an off-diagonal index")));
            }
            if seen[i * n + j] {
                return Err(Error::InvalidChain(format!("pair ({i}, {j}) appears twice")));
            }
            seen[i * n + j] = true;
            normalized.push((i, j));
        }
        Ok(Self { n, pairs: normalized })
    }

    /// From one-based pairs, as written in the JSON chain files.
    pub fn from_one_based(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut zero = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == 0 || b == 0 {
                return Err(Error::InvalidChain(format!("one-based pair ({a}, {b}) contains 0")));
            }
            zero.push((a - 1, b - 1));
        }
        Self::new(n, zero)
    }

    /// `(0,1), (0,2), ..., (0,n−1), (1,2), ..., (n−2,n−1)`
    pub fn canonical(n: usize) -> Result<Self> {
        let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Self::new(n, pairs)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn first(&self) -> (usize, usize) {
        self.pairs[0]
    }

    pub fn last(&self) -> (usize, usize) {
        self.pairs[self.pairs.len() - 1]
    }

    pub fn to_one_based(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
    }

    /// Offsets of the chain's pairs in the packed storage of an order-`n` matrix.
    pub fn packed_offsets(&self) -> Vec<usize> {
        let n = self.n;
        self.pairs.iter().map(|&(i, j)| i * (2 * n - i + 1) / 2 + (j - i)).collect()
    }

    /// Chain entries of `d` in chain order.
    pub fn values(&self, d: &SymmetricMatrix) -> Vec<f64> {
        self.pairs.iter().map(|&(i, j)| d.get(i, j)).collect()
    }

    /// Largest increase `D[p_{k+1}] − D[p_k]` along the chain; `<= 0` when satisfied exactly.
    pub fn max_violation(&self, d: &SymmetricMatrix) -> f64 {
        assert_eq!(d.n(), self.n, "matrix order does not match chain");
        self.values(d).windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `true` iff consecutive chain entries of `d` are nonincreasing within `tol`.
pub fn chain_satisfied(d: &SymmetricMatrix, chain: &OrdinalChain, tol: f64) -> bool {
    chain.len() < 2 || chain.max_violation(d) <= tol
}

/// At least two off-diagonal entries differ by more than `tol`.
pub fn is_nontrivial(d: &SymmetricMatrix, tol: f64) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    d.for_each_pair(|_, _, v| {
        lo = lo.min(v);
        hi = hi.max(v);
    });
    hi - lo > tol
}

/// The four-point ranking whose only feasible EDM in one dimension is zero:
/// `D₂₃ >= D₁₂ >= D₁₃ >= D₁₄ >= D₃₄ >= D₂₄` (one-based).
pub fn crowding_chain() -> OrdinalChain {
    OrdinalChain::from_one_based(4, &[(2, 3), (1, 2), (1, 3), (1, 4), (3, 4), (2, 4)])
        .expect("fixed chain is valid")
}
