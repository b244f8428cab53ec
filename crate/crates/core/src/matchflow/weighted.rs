use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::bipartite::{BipartiteGraph, Matching};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("edge ({left}, {right}) has no weight")]
pub struct WeightError {
    pub left: usize,
    pub right: usize,
}

/// Maximum total weight matching, not necessarily perfect.
///
/// Solved as an assignment problem on the square matrix padded with zero
/// weights (Kuhn-Munkres with potentials). Negative edges never help, so
/// they are treated as absent.
pub fn max_weight_matching(graph: &BipartiteGraph) -> Result<Matching, WeightError> {
    let size = graph.left().max(graph.right());
    let mut weight = vec![vec![Rational::zero(); size]; size];
    let mut real = vec![vec![false; size]; size];
    for (l, r, w) in graph.edges() {
        let w = w.as_ref().ok_or(WeightError {
            left: *l,
            right: *r,
        })?;
        if !w.is_negative() {
            weight[*l][*r] = w.clone();
            real[*l][*r] = true;
        }
    }
    let assignment = min_cost_assignment(&weight, size);
    let mut pairs = Vec::new();
    let mut total = Rational::zero();
    for (l, &r) in assignment.iter().enumerate() {
        if real[l][r] {
            total += &weight[l][r];
            pairs.push((l, r));
        }
    }
    Ok(Matching {
        pairs,
        weight: Some(total),
    })
}

/// Row `i` to column `result[i]`, maximising total `weight` (minimising
/// its negation). 1-based potentials as in the classical O(n^3) method.
fn min_cost_assignment(weight: &[Vec<Rational>], size: usize) -> Vec<usize> {
    if size == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| -&weight[i - 1][j - 1];
    let mut u = vec![Rational::zero(); size + 1];
    let mut v = vec![Rational::zero(); size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=size {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0usize; size];
    for j in 1..=size {
        result[p[j] - 1] = j - 1;
    }
    result
}
