use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::real::Real;

/// Weighted simple undirected graph with vertex volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingGraph<T> {
    edges: Vec<(usize, usize, T)>,
    volumes: Vec<T>,
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Real> OrderingGraph<T> {
    /// Unit volumes. Repeated pairs are merged by summing their weights;
    /// zero-weight edges are dropped after merging.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        Self::with_volumes(vec![T::one(); n], edges)
    }

    pub fn with_volumes(
        volumes: Vec<T>,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let n = volumes.len();
        if let Some(v) = volumes
            .iter()
            .position(|&v| !(v > T::zero()) || !v.is_finite())
        {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} has nonpositive volume"
            )));
        }
        let mut merged: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop at {u}")));
            }
            if w < T::zero() || !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            let slot = merged.entry(key).or_insert_with(T::zero);
            *slot = *slot + w;
        }
        let edges: Vec<_> = merged
            .into_iter()
            .filter(|&(_, w)| w > T::zero())
            .map(|((u, v), w)| (u, v, w))
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(Self {
            edges,
            volumes,
            adjacency,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.volumes.len()
    }

    /// Edges `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, T)] {
        &self.adjacency[v]
    }

    pub fn volumes(&self) -> &[T] {
        &self.volumes
    }

    pub fn volume(&self, v: usize) -> T {
        self.volumes[v]
    }

    pub fn total_volume(&self) -> T {
        self.volumes.iter().copied().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_parallel_edges_and_rejects_loops() {
        let g = OrderingGraph::from_edges(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 0.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 3.0)]);
        assert_eq!(g.neighbors(1), &[(0, 3.0)]);
        assert!(OrderingGraph::from_edges(2, [(1, 1, 1.0)]).is_err());
        assert!(OrderingGraph::from_edges(2, [(0, 2, 1.0)]).is_err());
        assert!(OrderingGraph::from_edges(2, [(0, 1, -1.0)]).is_err());
    }
}
