use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({left}, {right}) is outside a {lefts} x {rights} graph")]
    OutOfRange {
        left: usize,
        right: usize,
        lefts: usize,
        rights: usize,
    },
    #[error("edge ({left}, {right}) added twice")]
    Duplicate { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize, Option<Rational>)>,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            left,
            right,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); left],
        }
    }

    pub fn add_edge(&mut self, left: usize, right: usize) -> Result<(), GraphError> {
        self.insert(left, right, None)
    }

    pub fn add_weighted_edge(
        &mut self,
        left: usize,
        right: usize,
        weight: Rational,
    ) -> Result<(), GraphError> {
        self.insert(left, right, Some(weight))
    }

    fn insert(&mut self, l: usize, r: usize, weight: Option<Rational>) -> Result<(), GraphError> {
        if l >= self.left || r >= self.right {
            return Err(GraphError::OutOfRange {
                left: l,
                right: r,
                lefts: self.left,
                rights: self.right,
            });
        }
        let row = &mut self.adjacency[l];
        match row.binary_search(&r) {
            Ok(_) => Err(GraphError::Duplicate { left: l, right: r }),
            Err(pos) => {
                row.insert(pos, r);
                self.edges.push((l, r, weight));
                Ok(())
            }
        }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(usize, usize, Option<Rational>)] {
        &self.edges
    }

    /// Right neighbours of `left`, ascending.
    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adjacency[left]
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        left < self.left && self.adjacency[left].binary_search(&right).is_ok()
    }

    pub fn weight(&self, left: usize, right: usize) -> Option<&Rational> {
        self.edges
            .iter()
            .find(|(l, r, _)| *l == left && *r == right)
            .and_then(|(_, _, w)| w.as_ref())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    /// `(left, right)` pairs sorted by left id.
    pub pairs: Vec<(usize, usize)>,
    /// Total weight, set by [`max_weight_matching`](super::max_weight_matching).
    pub weight: Option<Rational>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn mate_of_left(&self, left: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == left).map(|p| p.1)
    }

    pub fn mate_of_right(&self, right: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == right).map(|p| p.0)
    }

    /// Whether every pair is an edge of `graph` and no endpoint repeats.
    pub fn is_matching_in(&self, graph: &BipartiteGraph) -> bool {
        let mut left = vec![false; graph.left()];
        let mut right = vec![false; graph.right()];
        self.pairs.iter().all(|&(l, r)| {
            graph.has_edge(l, r)
                && !core::mem::replace(&mut left[l], true)
                && !core::mem::replace(&mut right[r], true)
        })
    }
}

const NONE: usize = usize::MAX;

/// Hopcroft-Karp.
pub fn max_cardinality_matching(graph: &BipartiteGraph) -> Matching {
    let (nl, nr) = (graph.left(), graph.right());
    let mut mate_l = vec![NONE; nl];
    let mut mate_r = vec![NONE; nr];
    let mut dist = vec![0usize; nl];
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..nl {
            if mate_l[l] == NONE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in graph.neighbors(l) {
                let next = mate_r[r];
                if next == NONE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; nl];
        for l in 0..nl {
            if mate_l[l] == NONE {
                augment(graph, l, &mut mate_l, &mut mate_r, &mut dist, &mut cursor);
            }
        }
    }
    Matching {
        pairs: (0..nl)
            .filter(|&l| mate_l[l] != NONE)
            .map(|l| (l, mate_l[l]))
            .collect(),
        weight: None,
    }
}

fn augment(
    graph: &BipartiteGraph,
    l: usize,
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    let adj = graph.neighbors(l);
    while cursor[l] < adj.len() {
        let r = adj[cursor[l]];
        cursor[l] += 1;
        let next = mate_r[r];
        let ok = next == NONE
            || (dist[next] == dist[l] + 1 && augment(graph, next, mate_l, mate_r, dist, cursor));
        if ok {
            mate_l[l] = r;
            mate_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_two_by_two_is_perfect() {
        let mut g = BipartiteGraph::new(2, 2);
        for l in 0..2 {
            for r in 0..2 {
                g.add_edge(l, r).unwrap();
            }
        }
        let m = max_cardinality_matching(&g);
        assert_eq!(m.size(), 2);
        assert!(m.is_matching_in(&g));
    }

    #[test]
    fn left_side_limits_size() {
        let mut g = BipartiteGraph::new(1, 2);
        g.add_edge(0, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(max_cardinality_matching(&g).pairs, vec![(0, 0)]);
    }

    #[test]
    fn no_edges_gives_empty_matching() {
        let g = BipartiteGraph::new(3, 3);
        assert_eq!(max_cardinality_matching(&g).size(), 0);
    }

    #[test]
    fn needs_augmenting_path() {
        // Greedy 0-0 blocks 1; the optimum re-routes 0 to 1.
        let mut g = BipartiteGraph::new(2, 2);
        g.add_edge(0, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 0).unwrap();
        assert_eq!(max_cardinality_matching(&g).pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = BipartiteGraph::new(1, 1);
        assert!(g.add_edge(1, 0).is_err());
        g.add_edge(0, 0).unwrap();
        assert_eq!(
            g.add_edge(0, 0),
            Err(GraphError::Duplicate { left: 0, right: 0 })
        );
    }
}
