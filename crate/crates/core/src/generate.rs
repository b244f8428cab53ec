//! Random instances and allocations for tests and the command line.
//!
//! All functions are deterministic for a given RNG state.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::allocation::Allocation;
use crate::instance::{Aggregation, Instance, InstanceError, Polarity};
use crate::rational::Rational;
use crate::topology::TopologyKind;

/// Parameters of [`random_instance`]. Values are `k / d` with
/// `0 <= k <= max_numer` and `1 <= d <= max_denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceShape {
    pub topology: TopologyKind,
    pub agents: usize,
    pub items: usize,
    pub aggregation: Aggregation,
    pub polarity: Polarity,
    pub max_numer: u32,
    pub max_denom: u32,
    /// Rescale rows to total (or maximum) 1. Rows are redrawn until
    /// they have a positive entry.
    pub normalize: bool,
}

impl InstanceShape {
    pub fn new(topology: TopologyKind, agents: usize, items: usize) -> Self {
        InstanceShape {
            topology,
            agents,
            items,
            aggregation: Aggregation::Add,
            polarity: Polarity::Chores,
            max_numer: 6,
            max_denom: 3,
            normalize: true,
        }
    }

    pub fn aggregation(mut self, aggregation: Aggregation) -> Self {
        self.aggregation = aggregation;
        self
    }

    pub fn polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn values(mut self, max_numer: u32, max_denom: u32) -> Self {
        self.max_numer = max_numer;
        self.max_denom = max_denom;
        self
    }

    pub fn normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }
}

/// Edges of a connected graph of the given kind on `items` vertices.
/// Paths run `0-1-..`, stars are centered at 0, trees attach each vertex
/// to a random earlier one and general graphs add random chords to a tree.
pub fn random_edges<R: Rng + ?Sized>(
    kind: TopologyKind,
    items: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    match kind {
        TopologyKind::Path => (1..items).map(|v| (v - 1, v)).collect(),
        TopologyKind::Star => (1..items).map(|v| (0, v)).collect(),
        TopologyKind::Complete => (0..items)
            .flat_map(|a| (a + 1..items).map(move |b| (a, b)))
            .collect(),
        TopologyKind::Tree => (1..items).map(|v| (rng.gen_range(0..v), v)).collect(),
        TopologyKind::General => {
            let mut edges: Vec<(usize, usize)> =
                (1..items).map(|v| (rng.gen_range(0..v), v)).collect();
            for a in 0..items {
                for b in a + 1..items {
                    if !edges.contains(&(a, b)) && rng.gen_bool(0.25) {
                        edges.push((a, b));
                    }
                }
            }
            edges
        }
    }
}

pub fn random_instance<R: Rng + ?Sized>(
    shape: &InstanceShape,
    rng: &mut R,
) -> Result<Instance, InstanceError> {
    let edges = random_edges(shape.topology, shape.items, rng);
    let mut table = Vec::with_capacity(shape.agents);
    for _ in 0..shape.agents {
        let row = loop {
            let row: Vec<Rational> = (0..shape.items)
                .map(|_| small_rational(shape.max_numer, shape.max_denom, rng))
                .collect();
            if !shape.normalize || shape.max_numer == 0 || row.iter().any(|v| v.is_positive()) {
                break row;
            }
        };
        table.push(row);
    }
    let inst = Instance::new(
        shape.agents,
        shape.items,
        edges,
        table,
        shape.aggregation,
        shape.polarity,
    )?;
    if shape.normalize {
        inst.normalize()
    } else {
        Ok(inst)
    }
}

/// Breaks ties within every row by adding `k * delta` for a random
/// ranking `k` of the items, where `delta` is small enough that distinct
/// values keep their order. Rows are not renormalized.
pub fn make_strict<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Instance {
    let m = instance.items();
    let table: Vec<Vec<Rational>> = instance
        .table()
        .iter()
        .map(|row| {
            let mut sorted = row.clone();
            sorted.sort();
            sorted.dedup();
            let gap = sorted
                .windows(2)
                .map(|w| &w[1] - &w[0])
                .min()
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            let delta = gap / Rational::from_integer((2 * m as i64).into());
            let mut rank: Vec<usize> = (0..m).collect();
            rank.shuffle(rng);
            row.iter()
                .zip(&rank)
                .map(|(v, &k)| v + &delta * Rational::from_integer((k as i64).into()))
                .collect()
        })
        .collect();
    Instance::with_names(
        instance.agents(),
        instance.item_names().to_vec(),
        instance.edges().to_vec(),
        table,
        instance.aggregation(),
        instance.polarity(),
    )
    .expect("perturbation keeps the instance well formed")
}

/// A random valid allocation: a random number of connected pieces grown
/// from random seeds, handed to distinct random agents. Returns `None`
/// when the graph has more components than there are agents.
pub fn random_valid_allocation<R: Rng + ?Sized>(
    instance: &Instance,
    rng: &mut R,
) -> Option<Allocation> {
    let (n, m) = (instance.agents(), instance.items());
    let pieces = rng.gen_range(1..=n.min(m));
    let mut piece_of: Vec<Option<usize>> = vec![None; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut used = 0;
    for &v in order.iter().take(pieces) {
        piece_of[v] = Some(used);
        used += 1;
    }
    let mut left = m - used;
    while left > 0 {
        let frontier: Vec<(usize, usize)> = (0..m)
            .filter(|&v| piece_of[v].is_none())
            .filter_map(|v| {
                let owners: Vec<usize> = instance
                    .neighbors(v)
                    .iter()
                    .filter_map(|&u| piece_of[u])
                    .collect();
                owners.choose(rng).map(|&p| (v, p))
            })
            .collect();
        match frontier.choose(rng) {
            Some(&(v, p)) => piece_of[v] = Some(p),
            None => {
                // Unreachable component: it needs a fresh piece.
                if used == n {
                    return None;
                }
                let v = (0..m)
                    .find(|&v| piece_of[v].is_none())
                    .expect("unassigned item");
                piece_of[v] = Some(used);
                used += 1;
            }
        }
        left -= 1;
    }
    let mut agents: Vec<usize> = (0..n).collect();
    agents.shuffle(rng);
    let owners: Vec<usize> = piece_of
        .into_iter()
        .map(|p| agents[p.expect("assigned")])
        .collect();
    Some(Allocation::from_owners(n, &owners))
}

/// Random `k / d` in `[0, max_numer]` as used by [`random_instance`].
pub fn small_rational<R: Rng + ?Sized>(max_numer: u32, max_denom: u32, rng: &mut R) -> Rational {
    let numer = rng.gen_range(0..=max_numer);
    let denom = rng.gen_range(1..=max_denom.max(1));
    Rational::new(i64::from(numer).into(), i64::from(denom).into())
}
