//! Small undirected simple graphs stored as sorted neighbor lists.

use std::collections::VecDeque;

use nalgebra::DMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from neighbor lists; lists are sorted and deduplicated.
    /// Symmetry is the caller's responsibility and is checked in debug builds.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = Graph { adj };
        debug_assert!(g.is_symmetric(), "adjacency lists must be symmetric");
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_adjacency(adj)
    }

    fn is_symmetric(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&v| self.adj[v].binary_search(&u).is_ok()))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        Graph { adj }
    }

    /// BFS distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// True when `map` is a bijection carrying edges exactly onto edges of `other`.
    pub fn is_isomorphism(&self, other: &Graph, map: &[usize]) -> bool {
        if self.n() != other.n() || map.len() != self.n() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut seen = vec![false; other.n()];
        for &m in map {
            if m >= other.n() || std::mem::replace(&mut seen[m], true) {
                return false;
            }
        }
        self.edges().all(|(u, v)| other.has_edge(map[u], map[v]))
    }

    pub fn is_automorphism(&self, map: &[usize]) -> bool {
        self.is_isomorphism(self, map)
    }

    pub fn dense_adjacency(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_basics() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)));
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.is_connected());
        assert_eq!(c5.distances_from(0), vec![0, 1, 2, 2, 1]);
        assert!(c5.is_automorphism(&[1, 2, 3, 4, 0]));
        assert!(!c5.is_automorphism(&[0, 2, 1, 3, 4]));
        let path = c5.without_edge(4, 0);
        assert_eq!(path.edge_count(), 4);
        assert!(!c5.is_isomorphism(&path, &[0, 1, 2, 3, 4]));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(!two.is_connected());
    }
}
