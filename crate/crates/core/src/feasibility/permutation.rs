use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::OrdinalChain;
use crate::error::{Error, Result};
use crate::matrix_core::{PointCloud, SymmetricMatrix};

/// Largest `n` for which relabelings are searched exhaustively.
pub const EQUIVALENCE_MAX_N: usize = 8;

/// A bijection on `{0..n}`; as a matrix it is `P = [e_{P(0)}, ..., e_{P(n−1)}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationMap {
    image: Vec<usize>,
}

impl PermutationMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut hit = vec![false; n];
        for &p in &image {
            if p >= n || hit[p] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection on 0..{n}")));
            }
            hit[p] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    /// From the one-based column indices `t_i` of `P = [e_{t_1}, ..., e_{t_n}]`.
    pub fn from_columns_one_based(columns: &[usize]) -> Result<Self> {
        if columns.contains(&0) {
            return Err(Error::InvalidPermutation("one-based columns contain 0".into()));
        }
        Self::new(columns.iter().map(|c| c - 1).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.image.iter().enumerate() {
            inv[p] = i;
        }
        Self { image: inv }
    }

    /// Matrix product `self · other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Self { image: other.image.iter().map(|&i| self.image[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// `PᵀDP`, i.e. `D̂_ij = D_{P(i) P(j)}`.
pub fn relabel_edm(d: &SymmetricMatrix, p: &PermutationMap) -> SymmetricMatrix {
    assert_eq!(d.n(), p.n(), "permutation order does not match matrix");
    SymmetricMatrix::from_fn(d.n(), |i, j| d.get(p.apply(i), p.apply(j))).expect("order already validated")
}

/// `XP`, i.e. `x̂_i = x_{P(i)}`; its EDM is [`relabel_edm`] of the original.
pub fn relabel_points(x: &PointCloud, p: &PermutationMap) -> PointCloud {
    assert_eq!(x.count(), p.n(), "permutation order does not match point count");
    let mut out = x.clone();
    for i in 0..x.count() {
        out.point_mut(i).copy_from_slice(x.point(p.apply(i)));
    }
    out
}

#[inline]
fn unordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether `PᵀDP ∈ Ω(to)` for every `D ∈ Ω(from)`.
///
/// Since `Ω(from)` contains matrices with strictly decreasing chain entries,
/// this holds exactly when `P` maps the `k`-th pair of `to` onto the `k`-th
/// pair of `from` for every `k`.
pub fn is_equivalence_witness(from: &OrdinalChain, to: &OrdinalChain, p: &PermutationMap) -> bool {
    from.n() == to.n()
        && p.n() == from.n()
        && from
            .pairs()
            .iter()
            .zip(to.pairs())
            .all(|(&f, &(i, j))| unordered(p.apply(i), p.apply(j)) == f)
}

/// Searches all `n!` relabelings for a witness that `from ~ to`.
pub fn chains_equivalent(from: &OrdinalChain, to: &OrdinalChain) -> Result<Option<PermutationMap>> {
    let n = from.n();
    if to.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: to.n() });
    }
    if n > EQUIVALENCE_MAX_N {
        return Err(Error::TooManyPoints { n, max: EQUIVALENCE_MAX_N });
    }
    let mut image: Vec<usize> = (0..n).collect();
    let mut found = None;
    for_each_permutation(&mut image, &mut |img| {
        let p = PermutationMap { image: img.to_vec() };
        if is_equivalence_witness(from, to, &p) {
            found = Some(p);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Heap's algorithm; stops once `visit` returns `true`.
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize]) -> bool) {
    let n = items.len();
    if visit(items) {
        return;
    }
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            if visit(items) {
                return;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Partitions all chains on `n <= 3` points into equivalence classes.
pub fn equivalence_classes(n: usize) -> Result<Vec<Vec<OrdinalChain>>> {
    const MAX: usize = 3;
    if n > MAX {
        return Err(Error::TooManyPoints { n, max: MAX });
    }
    let canonical = OrdinalChain::canonical(n)?;
    let mut order: Vec<usize> = (0..canonical.len()).collect();
    let mut chains = Vec::new();
    for_each_permutation(&mut order, &mut |ord| {
        let pairs = ord.iter().map(|&k| canonical.pairs()[k]).collect();
        chains.push(OrdinalChain::new(n, pairs).expect("permutation of canonical chain"));
        false
    });
    let mut classes: Vec<Vec<OrdinalChain>> = Vec::new();
    for chain in chains {
        let mut placed = false;
        for class in classes.iter_mut() {
            if chains_equivalent(&class[0], &chain)?.is_some() {
                class.push(chain.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![chain]);
        }
    }
    Ok(classes)
}
