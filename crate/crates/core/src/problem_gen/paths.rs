use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix_core::SymmetricMatrix;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All-pairs shortest path lengths over the graph whose edges are the
/// positive off-diagonal entries of `delta`, weighted by those entries.
///
/// A disconnected graph is reported with the vertices unreachable from 0.
pub fn shortest_path_completion(delta: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let n = delta.n();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    delta.for_each_pair(|i, j, v| {
        if v > 0.0 {
            adj[i].push((j, v));
            adj[j].push((i, v));
        }
    });
    let mut out = SymmetricMatrix::zeros(n)?;
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        dist[src] = 0.0;
        heap.push(Entry { dist: 0.0, node: src });
        while let Some(Entry { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(next, w) in &adj[node] {
                let cand = d + w;
                if cand < dist[next] {
                    dist[next] = cand;
                    heap.push(Entry { dist: cand, node: next });
                }
            }
        }
        if src == 0 {
            let unreachable: Vec<usize> = (0..n).filter(|&j| dist[j].is_infinite()).collect();
            if !unreachable.is_empty() {
                return Err(Error::Disconnected { root: 0, unreachable });
            }
        }
        for j in (src + 1)..n {
            out.set(src, j, dist[j]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_distances_add() {
        let d = SymmetricMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]], 0.0).unwrap();
        let sp = shortest_path_completion(&d).unwrap();
        assert_eq!(sp.get(0, 2), 2.0);
        assert_eq!(sp.get(0, 1), 1.0);
    }

    #[test]
    fn shortcut_is_not_taken_when_longer() {
        let d = SymmetricMatrix::from_rows(&[vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]], 0.0).unwrap();
        assert_eq!(shortest_path_completion(&d).unwrap().get(0, 2), 2.0);
    }

    #[test]
    fn isolated_vertices_are_reported() {
        let d = SymmetricMatrix::zeros(3).unwrap();
        assert_eq!(shortest_path_completion(&d), Err(Error::Disconnected { root: 0, unreachable: vec![1, 2] }));
    }
}
