use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{chain_satisfied, is_nontrivial, OrdinalChain};
use crate::error::{Error, Result};
use crate::math::{norm, sqrt};
use crate::matrix_core::{PointCloud, SymmetricMatrix};

fn check_edge(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Construction(format!("edge length must be positive and finite, got {t}")));
    }
    Ok(())
}

/// Vertices of a regular simplex with `k` vertices in `ℝ^{k−1}`, centred at the
/// origin. Built one vertex at a time: each new vertex sits above the current
/// centroid at height `√(t² − b²)`, where `b` is the current circumradius.
fn simplex_vertices(k: usize, t: f64) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
    while pts.len() < k {
        let b = norm(&pts[0]);
        let h = sqrt((t * t - b * b).max(0.0));
        for p in pts.iter_mut() {
            p.push(0.0);
        }
        let dim = pts[0].len();
        let mut apex = vec![0.0; dim];
        apex[dim - 1] = h;
        pts.push(apex);
        let shift = h / pts.len() as f64;
        for p in pts.iter_mut() {
            p[dim - 1] -= shift;
        }
    }
    pts
}

/// `k − 2` simplex vertices plus two apexes mirrored across their hyperplane,
/// in `ℝ^{max(k−2, 1)}`. The apexes come last.
fn two_apex_vertices(k: usize, t: f64) -> Vec<Vec<f64>> {
    debug_assert!(k >= 3);
    let mut pts = simplex_vertices(k - 2, t);
    let b = norm(&pts[0]);
    let h = sqrt(t * t - b * b);
    for p in pts.iter_mut() {
        p.push(0.0);
    }
    let dim = pts[0].len();
    for sign in [1.0, -1.0] {
        let mut apex = vec![0.0; dim];
        apex[dim - 1] = sign * h;
        pts.push(apex);
    }
    pts
}

fn cloud(dim: usize, pts: &[Vec<f64>]) -> Result<PointCloud> {
    let padded: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.resize(dim, 0.0);
            q
        })
        .collect();
    PointCloud::from_points(dim, &padded)
}

pub fn regular_simplex(n: usize, t: f64) -> Result<PointCloud> {
    if n < 2 {
        return Err(Error::OrderTooSmall(n));
    }
    check_edge(t)?;
    cloud(n - 1, &simplex_vertices(n, t))
}

/// Circumradii `b_1, ..., b_k` of regular simplices with `2, ..., k+1`
/// vertices and edge `t`, from `b_1 = t/2` and `b_{k+1} = t² / (2√(t² − b_k²))`.
pub fn apex_height_sequence(k: usize, t: f64) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Construction("sequence length must be at least 1".into()));
    }
    check_edge(t)?;
    let mut b = Vec::with_capacity(k);
    b.push(t / 2.0);
    while b.len() < k {
        let prev = b[b.len() - 1];
        b.push(t * t / (2.0 * sqrt(t * t - prev * prev)));
    }
    Ok(b)
}

/// Two apexes over an `(n−2)`-vertex regular simplex, in `ℝ^{n−2}`.
///
/// The apexes are assigned to the chain's first pair, so that entry is the
/// unique largest distance and every other off-diagonal entry equals `t²`.
pub fn construct_nontrivial_nminus2(chain: &OrdinalChain, t: f64) -> Result<(PointCloud, SymmetricMatrix)> {
    let n = chain.n();
    if n < 4 {
        return Err(Error::OrderTooSmall(n));
    }
    check_edge(t)?;
    let x = cloud(n - 2, &place_two_apex(n, chain.first(), t))?;
    let d = x.edm()?;
    Ok((x, d))
}

/// Two-apex vertices ordered by point label, with the apexes on `pair`.
fn place_two_apex(n: usize, pair: (usize, usize), t: f64) -> Vec<Vec<f64>> {
    let mut verts = two_apex_vertices(n, t);
    let lower = verts.pop().expect("two apexes");
    let upper = verts.pop().expect("two apexes");
    let mut base = verts.into_iter();
    (0..n)
        .map(|i| match i {
            _ if i == pair.0 => upper.clone(),
            _ if i == pair.1 => lower.clone(),
            _ => base.next().expect("one base vertex per remaining label"),
        })
        .collect()
}

/// Which coincident-point pattern applies to a chain, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremesCase {
    /// First and last pair share no index.
    Disjoint,
    /// First and last pair overlap, but the last two pairs do not.
    TailDisjoint,
}

pub fn extremes_case(chain: &OrdinalChain) -> Option<ExtremesCase> {
    let m = chain.len();
    if m < 2 {
        return None;
    }
    let overlap = |a: (usize, usize), b: (usize, usize)| a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    let (first, last, second_last) = (chain.first(), chain.last(), chain.pairs()[m - 2]);
    if !overlap(first, last) {
        Some(ExtremesCase::Disjoint)
    } else if !overlap(second_last, last) {
        Some(ExtremesCase::TailDisjoint)
    } else {
        None
    }
}

/// Nontrivial feasible points in `ℝʳ` built from coincident points.
///
/// With disjoint extremes the last pair is merged into one site and the
/// remaining `n − 1` sites take the two-apex shape, apexes on the first pair.
/// Otherwise, if the last two pairs are disjoint, both are merged and the
/// `n − 2` sites form a regular simplex. Both shapes need `r >= n − 3`.
/// Returns `None` when neither pattern applies.
pub fn construct_disjoint_extremes(chain: &OrdinalChain, r: usize) -> Result<Option<PointCloud>> {
    if r < 2 {
        return Err(Error::RankOutOfRange { rank: r, max: usize::MAX });
    }
    let n = chain.n();
    let Some(case) = extremes_case(chain) else {
        return Ok(None);
    };
    if r + 3 < n {
        return Err(Error::Construction(format!(
            "coincident-point construction for n = {n} needs r >= {}, got {r}",
            n - 3
        )));
    }
    let t = 1.0;
    let m = chain.len();
    // labels listed in site order; merged pairs share a site
    let (verts, groups): (Vec<Vec<f64>>, Vec<Vec<usize>>) = match case {
        ExtremesCase::Disjoint => {
            let (last, first) = (chain.last(), chain.first());
            let mut groups = vec![vec![last.0, last.1]];
            groups.extend((0..n).filter(|&i| ![last.0, last.1, first.0, first.1].contains(&i)).map(|i| vec![i]));
            groups.push(vec![first.0]);
            groups.push(vec![first.1]);
            (two_apex_vertices(n - 1, t), groups)
        }
        ExtremesCase::TailDisjoint => {
            let (a, b) = (chain.pairs()[m - 1], chain.pairs()[m - 2]);
            let mut groups = vec![vec![a.0, a.1], vec![b.0, b.1]];
            groups.extend((0..n).filter(|&i| ![a.0, a.1, b.0, b.1].contains(&i)).map(|i| vec![i]));
            (simplex_vertices(n - 2, t), groups)
        }
    };
    let mut site = vec![0; n];
    for (s, group) in groups.iter().enumerate() {
        for &i in group {
            site[i] = s;
        }
    }
    let pts: Vec<Vec<f64>> = site.iter().map(|&s| verts[s].clone()).collect();
    let x = cloud(r, &pts)?;
    let d = x.edm()?;
    if chain_satisfied(&d, chain, 1e-9) && is_nontrivial(&d, 1e-9) {
        Ok(Some(x))
    } else {
        Err(Error::Construction("coincident-point configuration failed verification".into()))
    }
}

/// One block of a partitioned construction: zero-based point labels and an
/// optional chain over positions within `members`.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    pub members: Vec<usize>,
    pub chain: Option<OrdinalChain>,
}

impl Part {
    pub fn new(members: Vec<usize>) -> Self {
        Self { members, chain: None }
    }

    pub fn with_chain(members: Vec<usize>, chain: OrdinalChain) -> Self {
        Self { members, chain: Some(chain) }
    }

    /// Chain over global labels.
    pub fn global_chain(&self) -> Option<Vec<(usize, usize)>> {
        self.chain
            .as_ref()
            .map(|c| c.pairs().iter().map(|&(a, b)| (self.members[a], self.members[b])).collect())
    }
}

/// Places each part independently and spreads the parts along the first axis,
/// `10·t·n` apart. Parts of three or more points use the two-apex shape on
/// their own chain (canonical if none is given).
pub fn construct_partitioned(parts: &[Part], r: usize, t: f64) -> Result<PointCloud> {
    if r == 0 {
        return Err(Error::RankOutOfRange { rank: r, max: usize::MAX });
    }
    check_edge(t)?;
    let n: usize = parts.iter().map(|p| p.members.len()).sum();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut seen = vec![false; n];
    for (k, part) in parts.iter().enumerate() {
        let s = part.members.len();
        if s == 0 {
            return Err(Error::Construction(format!("part {k} is empty")));
        }
        if s > r + 2 {
            return Err(Error::Construction(format!("part {k} has {s} points, more than r + 2 = {}", r + 2)));
        }
        for &i in &part.members {
            if i >= n || seen[i] {
                return Err(Error::Construction(format!("parts do not partition 0..{n} (label {i})")));
            }
            seen[i] = true;
        }
        if let Some(c) = &part.chain {
            if c.n() != s {
                return Err(Error::DimensionMismatch { expected: s, found: c.n() });
            }
        }
    }

    let mut x = PointCloud::zeros(r, n)?;
    let spacing = 10.0 * t * n as f64;
    for (k, part) in parts.iter().enumerate() {
        let s = part.members.len();
        let local: Vec<Vec<f64>> = match s {
            1 => vec![Vec::new()],
            2 => simplex_vertices(2, t),
            _ => {
                let first = part.chain.as_ref().map_or((0, 1), OrdinalChain::first);
                place_two_apex(s, first, t)
            }
        };
        for (p, &label) in local.iter().zip(&part.members) {
            let dst = x.point_mut(label);
            dst[..p.len()].copy_from_slice(p);
            dst[0] += spacing * k as f64;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_has_equal_edges() {
        for (n, t) in [(2, 1.0), (3, 1.0), (7, 0.3), (20, 2.0)] {
            let x = regular_simplex(n, t).unwrap();
            assert_eq!(x.dim(), n - 1);
            for i in 0..n {
                for j in (i + 1)..n {
                    assert!((x.distance(i, j) - t).abs() <= 1e-9 * t);
                }
            }
            assert!(x.centroid().iter().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn circumradius_matches_sequence() {
        let b = apex_height_sequence(12, 1.0).unwrap();
        for k in 1..=12 {
            let x = regular_simplex(k + 1, 1.0).unwrap();
            assert!((norm(x.point(0)) - b[k - 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn two_apex_small_orders() {
        let c = OrdinalChain::canonical(4).unwrap();
        let (_, d) = construct_nontrivial_nminus2(&c, 1.0).unwrap();
        assert!((d.get(0, 1) - 3.0).abs() < 1e-12);
        assert_eq!(construct_nontrivial_nminus2(&OrdinalChain::canonical(3).unwrap(), 1.0).unwrap_err(), Error::OrderTooSmall(3));
    }

    #[test]
    fn extremes_guard() {
        // (1,2) first and (1,3) second to last, (2,3) last: every pair overlaps
        let c = OrdinalChain::canonical(3).unwrap();
        assert_eq!(extremes_case(&c), None);
        assert_eq!(construct_disjoint_extremes(&c, 2).unwrap(), None);
    }

    #[test]
    fn partition_rejects_oversized_part() {
        let parts = [Part::new((0..5).collect())];
        assert!(matches!(construct_partitioned(&parts, 2, 1.0), Err(Error::Construction(_))));
    }
}
