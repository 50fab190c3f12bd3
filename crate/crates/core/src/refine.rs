//! Brute-force graph isomorphism by individualization and refinement.
//!
//! Both graphs are colored together with shared color ids, so a balanced
//! coloring is a necessary condition at every node of the search tree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_VERTEX_CAP: usize = 80;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    /// `map[v]` is the image in the second graph of vertex `v` of the first.
    Isomorphic(Vec<usize>),
    NotIsomorphic,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub vertex_cap: usize,
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            vertex_cap: DEFAULT_VERTEX_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Pair<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    dist1: Vec<Vec<usize>>,
    dist2: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

/// Ranks arbitrary signatures into dense color ids, in signature order.
fn rank<K: Ord + Clone>(sigs: &[K]) -> Vec<u32> {
    let ids: BTreeMap<K, u32> = {
        let mut distinct: Vec<K> = sigs.to_vec();
        distinct.sort();
        distinct.dedup();
        distinct.into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect()
    };
    sigs.iter().map(|s| ids[s]).collect()
}

impl<'a> Pair<'a> {
    fn n(&self) -> usize {
        self.g1.n()
    }

    fn graph(&self, v: usize) -> (&Graph, usize) {
        if v < self.n() {
            (self.g1, v)
        } else {
            (self.g2, v - self.n())
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let n = self.n();
        let sigs: Vec<(usize, Vec<usize>)> = (0..2 * n)
            .map(|v| {
                let (g, u) = self.graph(v);
                let mut lambda: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .map(|&w| common(g.neighbors(u), g.neighbors(w)))
                    .collect();
                lambda.sort_unstable();
                (g.degree(u), lambda)
            })
            .collect();
        rank(&sigs)
    }

    /// Color refinement to the coarsest stable coloring.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.n();
        let mut classes = distinct(&colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>)> = (0..2 * n)
                .map(|v| {
                    let (g, u) = self.graph(v);
                    let off = if v < n { 0 } else { n };
                    let mut nb: Vec<u32> = g.neighbors(u).iter().map(|&w| colors[w + off]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            colors = rank(&sigs);
            let now = distinct(&colors);
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    fn balanced(&self, colors: &[u32]) -> bool {
        let n = self.n();
        let mut count: BTreeMap<u32, i64> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *count.entry(c).or_default() += if v < n { 1 } else { -1 };
        }
        count.values().all(|&c| c == 0)
    }

    fn search(&mut self, colors: Vec<u32>) -> Option<std::result::Result<Vec<usize>, ()>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Some(Err(()));
        }
        let colors = self.refine(colors);
        if !self.balanced(&colors) {
            return None;
        }
        let n = self.n();
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate().take(n) {
            cells.entry(c).or_default().push(v);
        }
        let target = cells
            .iter()
            .filter(|(_, vs)| vs.len() > 1)
            .min_by_key(|(c, vs)| (vs.len(), **c))
            .map(|(&c, _)| c);
        let Some(cell) = target else {
            let mut map = vec![0; n];
            for v in 0..n {
                map[v] = (n..2 * n).find(|&w| colors[w] == colors[v]).expect("balanced") - n;
            }
            return self.g1.is_isomorphism(self.g2, &map).then_some(Ok(map));
        };
        let v = cells[&cell][0];
        let candidates: Vec<usize> = (n..2 * n).filter(|&w| colors[w] == cell).map(|w| w - n).collect();
        for w in candidates {
            let sigs: Vec<(u32, usize)> = (0..2 * n)
                .map(|x| {
                    let d = if x < n { self.dist1[v][x] } else { self.dist2[w][x - n] };
                    (colors[x], d)
                })
                .collect();
            if let Some(found) = self.search(rank(&sigs)) {
                return Some(found);
            }
        }
        None
    }
}

fn common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Exact isomorphism test; any returned bijection has been verified edge by edge.
pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph, limits: SearchLimits) -> Result<BruteForceOutcome> {
    if g1.n().max(g2.n()) > limits.vertex_cap {
        return Err(Error::Precondition(format!(
            "graphs with {} and {} vertices exceed the cap {}",
            g1.n(),
            g2.n(),
            limits.vertex_cap
        )));
    }
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(BruteForceOutcome::NotIsomorphic);
    }
    if g1.n() == 0 {
        return Ok(BruteForceOutcome::Isomorphic(Vec::new()));
    }
    let mut pair = Pair {
        g1,
        g2,
        dist1: (0..g1.n()).map(|v| g1.distances_from(v)).collect(),
        dist2: (0..g2.n()).map(|v| g2.distances_from(v)).collect(),
        nodes: 0,
        budget: limits.node_budget,
    };
    let colors = pair.initial_colors();
    Ok(match pair.search(colors) {
        Some(Ok(map)) => BruteForceOutcome::Isomorphic(map),
        Some(Err(())) => BruteForceOutcome::BudgetExceeded,
        None => BruteForceOutcome::NotIsomorphic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, VoltageAssignment};
    use crate::field::FiniteField;
    use std::sync::Arc;

    fn cycle(n: usize, shuffle: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| ((i * shuffle) % n, ((i + 1) * shuffle) % n)))
    }

    #[test]
    fn cycles_and_small_cases() {
        let a = cycle(15, 1);
        let b = cycle(15, 2);
        let BruteForceOutcome::Isomorphic(map) = brute_force_isomorphic(&a, &b, SearchLimits::default()).unwrap()
        else {
            panic!("cycles are isomorphic");
        };
        assert!(a.is_isomorphism(&b, &map));

        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(
            brute_force_isomorphic(&cycle(6, 1), &two_triangles, SearchLimits::default()).unwrap(),
            BruteForceOutcome::NotIsomorphic
        );
        let cut = a.without_edge(0, 1);
        assert_eq!(
            brute_force_isomorphic(&a, &cut, SearchLimits::default()).unwrap(),
            BruteForceOutcome::NotIsomorphic
        );
        let limits = SearchLimits {
            vertex_cap: 10,
            ..SearchLimits::default()
        };
        assert!(brute_force_isomorphic(&a, &b, limits).is_err());
    }

    #[test]
    fn five_cycle_covers_agree() {
        let f = Arc::new(FiniteField::new(5, 1, None).unwrap());
        let a = build_cover(&VoltageAssignment::from_pair_values(f.clone(), 3, &[1]).unwrap());
        let b = build_cover(&VoltageAssignment::from_pair_values(f, 3, &[2]).unwrap());
        assert!(matches!(
            brute_force_isomorphic(a.graph(), b.graph(), SearchLimits::default()).unwrap(),
            BruteForceOutcome::Isomorphic(_)
        ));
    }

    #[test]
    fn tiny_budget_is_reported() {
        // the 3-cube and the circular ladder on 8 vertices
        let cube = Graph::from_edges(
            8,
            (0..8)
                .flat_map(|v| [1, 2, 4].map(|b| (v, v ^ b)))
                .filter(|(u, v)| u < v),
        );
        let ladder = Graph::from_edges(
            8,
            (0..4).flat_map(|i| [(i, (i + 1) % 4), (4 + i, 4 + (i + 1) % 4), (i, i + 4)]),
        );
        let limits = SearchLimits {
            vertex_cap: 80,
            node_budget: 1,
        };
        assert_eq!(
            brute_force_isomorphic(&cube, &ladder, limits).unwrap(),
            BruteForceOutcome::BudgetExceeded
        );
        assert!(matches!(
            brute_force_isomorphic(&cube, &ladder, SearchLimits::default()).unwrap(),
            BruteForceOutcome::Isomorphic(_)
        ));
    }
}
