//! Star graphs. The agent holding the center (the central agent) is the
//! only one who can hold more than one item; everybody else gets one
//! leaf or nothing. Each solver tries every agent as the central one and
//! reduces the rest to a matching or flow problem.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::allocation::Allocation;
use crate::fairness::{Criterion, FairnessQuery};
use crate::instance::{Aggregation, Instance};
use crate::matchflow::{
    max_cardinality_matching, max_flow, max_weight_matching, BipartiteGraph, FlowNetwork,
};
use crate::rational::Rational;
use crate::topology::star_center;
use crate::{
    require_aggregation, require_chores, require_criterion, Decision, EquitableWitness, SolverError,
};

/// A star: its center and the leaves in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarShape {
    pub center: usize,
    pub leaves: Vec<usize>,
}

impl StarShape {
    pub fn of(instance: &Instance) -> Result<Self, SolverError> {
        let center =
            star_center(instance).ok_or(SolverError::WrongTopology { expected: "a star" })?;
        Ok(StarShape {
            center,
            leaves: (0..instance.items()).filter(|&v| v != center).collect(),
        })
    }
}

/// One central candidate: the agent and the items it would keep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCandidate {
    pub agent: usize,
    /// Always contains the center.
    pub bundle: Vec<usize>,
}

fn others(instance: &Instance, central: usize) -> Vec<usize> {
    (0..instance.agents()).filter(|&a| a != central).collect()
}

fn zero() -> Rational {
    Rational::zero()
}

/// Bounds `c * share_i` for a proportionality query.
fn prop_bounds(instance: &Instance, query: &FairnessQuery) -> Vec<Rational> {
    (0..instance.agents())
        .map(|a| query.factor() * query.share(instance, a))
        .collect()
}

/// Additive proportionality. For a central candidate `i` with
/// `u_i(c) <= bound_i`, the other agents may take single leaves within
/// their own bound; a maximum-weight matching (weights `u_i(v)`) removes
/// as much as possible from `i`'s bundle. Agents left unmatched stay
/// empty.
pub fn solve_add_prop_star(
    instance: &Instance,
    query: &FairnessQuery,
) -> Result<Decision<Allocation>, SolverError> {
    let star = StarShape::of(instance)?;
    require_aggregation(instance, Aggregation::Add)?;
    require_chores(instance)?;
    require_criterion(query, Criterion::Prop)?;
    let bounds = prop_bounds(instance, query);
    for i in 0..instance.agents() {
        if instance.value(i, star.center) > &bounds[i] {
            continue;
        }
        let rest = others(instance, i);
        let mut graph = BipartiteGraph::new(rest.len(), star.leaves.len());
        for (l, &j) in rest.iter().enumerate() {
            for (r, &v) in star.leaves.iter().enumerate() {
                if instance.value(j, v) <= &bounds[j] {
                    graph
                        .add_weighted_edge(l, r, instance.value(i, v).clone())
                        .expect("fresh edge");
                }
            }
        }
        let matching = max_weight_matching(&graph).expect("all edges weighted");
        let central_value = instance.total(i) - matching.weight.as_ref().expect("weighted");
        let mut owners = vec![i; instance.items()];
        for &(l, r) in &matching.pairs {
            owners[star.leaves[r]] = rest[l];
        }
        debug_assert_eq!(
            central_value,
            instance.aggregate_known(i, (0..instance.items()).filter(|&v| owners[v] == i))
        );
        if central_value <= bounds[i] {
            return Ok(Decision::Feasible(Allocation::from_owners(
                instance.agents(),
                &owners,
            )));
        }
    }
    Ok(Decision::Infeasible)
}

/// Allocation in which every agent's bundle is worth 0 to it.
/// Independent of the aggregation.
pub fn solve_zero_star(instance: &Instance) -> Result<Decision<Allocation>, SolverError> {
    let star = StarShape::of(instance)?;
    require_chores(instance)?;
    Ok(bounded_star(
        instance,
        &star,
        &vec![zero(); instance.agents()],
    ))
}

/// Maximum-aggregation proportionality: every item an agent holds must be
/// within its bound, which is the zero-allocation problem with `0`
/// replaced by per-agent bounds.
pub fn solve_max_prop_star(
    instance: &Instance,
    query: &FairnessQuery,
) -> Result<Decision<Allocation>, SolverError> {
    let star = StarShape::of(instance)?;
    require_aggregation(instance, Aggregation::Max)?;
    require_chores(instance)?;
    require_criterion(query, Criterion::Prop)?;
    Ok(bounded_star(instance, &star, &prop_bounds(instance, query)))
}

/// Central `i` keeps every item within its bound; the leaves it cannot
/// keep must be matched to distinct other agents within theirs.
fn bounded_star(
    instance: &Instance,
    star: &StarShape,
    bounds: &[Rational],
) -> Decision<Allocation> {
    for i in 0..instance.agents() {
        if instance.value(i, star.center) > &bounds[i] {
            continue;
        }
        let outside: Vec<usize> = star
            .leaves
            .iter()
            .copied()
            .filter(|&v| instance.value(i, v) > &bounds[i])
            .collect();
        let rest = others(instance, i);
        let mut graph = BipartiteGraph::new(rest.len(), outside.len());
        for (l, &j) in rest.iter().enumerate() {
            for (r, &v) in outside.iter().enumerate() {
                if instance.value(j, v) <= &bounds[j] {
                    graph.add_edge(l, r).expect("fresh edge");
                }
            }
        }
        let matching = max_cardinality_matching(&graph);
        if matching.size() == outside.len() {
            let mut owners = vec![i; instance.items()];
            for &(l, r) in &matching.pairs {
                owners[outside[r]] = rest[l];
            }
            return Decision::Feasible(Allocation::from_owners(instance.agents(), &owners));
        }
    }
    Decision::Infeasible
}

/// Exact equitability under maximum aggregation.
///
/// `eta = 0` is the zero-allocation problem. For `eta > 0` nobody may be
/// empty, so `m >= n`; every non-central agent takes one leaf worth
/// exactly `eta`, and the central agent takes the center plus `m - n`
/// leaves worth at most `eta`, at least one of them exactly `eta` when
/// the center is worth less. A flow of value `m - 1` encodes this.
pub fn solve_max_eq_star(instance: &Instance) -> Result<Decision<EquitableWitness>, SolverError> {
    let star = StarShape::of(instance)?;
    require_aggregation(instance, Aggregation::Max)?;
    require_chores(instance)?;
    let (n, m) = (instance.agents(), instance.items());
    if let Decision::Feasible(allocation) = bounded_star(instance, &star, &vec![zero(); n]) {
        return Ok(Decision::Feasible(EquitableWitness {
            eta: zero(),
            allocation,
        }));
    }
    if m < n {
        return Ok(Decision::Infeasible);
    }
    for eta in instance
        .distinct_values()
        .into_iter()
        .filter(|v| !v.is_zero())
    {
        for i in 0..n {
            if let Some(allocation) = eq_flow(instance, &star, i, &eta) {
                return Ok(Decision::Feasible(EquitableWitness { eta, allocation }));
            }
        }
    }
    Ok(Decision::Infeasible)
}

fn eq_flow(instance: &Instance, star: &StarShape, i: usize, eta: &Rational) -> Option<Allocation> {
    let (n, m) = (instance.agents(), instance.items());
    let at_center = instance.value(i, star.center);
    if at_center > eta {
        return None;
    }
    let spare = (m - n) as i64;
    let gadget = at_center < eta;
    if gadget && spare < 1 {
        return None;
    }
    // Nodes: source, agents, leaves, r1, r2, sink.
    let leaf_node = |k: usize| 1 + n + k;
    let (r1, r2) = (1 + n + star.leaves.len(), 2 + n + star.leaves.len());
    let sink = r2 + 1;
    let mut net = FlowNetwork::new(sink + 1, 0, sink).expect("valid ends");
    // (arc, agent, leaf index) for arcs that hand a leaf to an agent.
    let mut hand: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..n {
        net.add_arc(0, 1 + a, if a == i { spare } else { 1 })
            .expect("valid arc");
    }
    for (k, &v) in star.leaves.iter().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            if instance.value(j, v) == eta {
                hand.push((
                    net.add_arc(1 + j, leaf_node(k), 1).expect("valid arc"),
                    j,
                    k,
                ));
            }
        }
        net.add_arc(leaf_node(k), sink, 1).expect("valid arc");
    }
    if gadget {
        net.add_arc(1 + i, r1, m as i64).expect("valid arc");
        net.add_arc(1 + i, r2, spare - 1).expect("valid arc");
    }
    for (k, &v) in star.leaves.iter().enumerate() {
        let u = instance.value(i, v);
        let from = match (gadget, u.cmp(eta)) {
            (_, core::cmp::Ordering::Greater) => continue,
            (false, _) => 1 + i,
            (true, core::cmp::Ordering::Equal) => r1,
            (true, core::cmp::Ordering::Less) => r2,
        };
        hand.push((net.add_arc(from, leaf_node(k), 1).expect("valid arc"), i, k));
    }
    let result = max_flow(&net);
    if result.value != (m - 1) as i64 {
        return None;
    }
    let mut owners = vec![i; m];
    for &(arc, agent, k) in &hand {
        if result.flows[arc] == 1 {
            owners[star.leaves[k]] = agent;
        }
    }
    let allocation = Allocation::from_owners(n, &owners);
    debug_assert!((0..n).all(|a| {
        let bundle = allocation.bundle(a);
        let value = instance.aggregate_known(a, bundle.iter().copied());
        let size_ok = if a == i {
            bundle.len() == m - n + 1
        } else {
            bundle.len() == 1
        };
        size_ok && &value == eta
    }));
    Some(allocation)
}

fn require_strict(instance: &Instance) -> Result<(), SolverError> {
    match instance.first_tie() {
        Some((agent, first, second)) => Err(SolverError::NotStrict {
            agent,
            first,
            second,
        }),
        None => Ok(()),
    }
}

/// Envy-freeness under additive aggregation with strict preferences.
///
/// With `m >= n` the central agent `i` must keep exactly its `m - n + 1`
/// cheapest items, which must include the center (condition i), and
/// their sum may not exceed its next item (condition ii). Each other
/// agent takes its favourite remaining leaf, provided it does not prefer
/// the central bundle (edge rule with the additive bundle value); a
/// perfect matching decides. With `m < n` somebody is empty, so every
/// bundle must be worth 0.
pub fn solve_add_ef_star_strict(instance: &Instance) -> Result<Decision<Allocation>, SolverError> {
    ef_star_strict(instance, Aggregation::Add)
}

/// As [`solve_add_ef_star_strict`] with maximum aggregation: condition
/// (ii) is implied and the edge rule uses the maximum.
pub fn solve_max_ef_star_strict(instance: &Instance) -> Result<Decision<Allocation>, SolverError> {
    ef_star_strict(instance, Aggregation::Max)
}

fn ef_star_strict(
    instance: &Instance,
    aggregation: Aggregation,
) -> Result<Decision<Allocation>, SolverError> {
    let star = StarShape::of(instance)?;
    require_aggregation(instance, aggregation)?;
    require_chores(instance)?;
    require_strict(instance)?;
    let (n, m) = (instance.agents(), instance.items());
    if n == 1 {
        return Ok(Decision::Feasible(Allocation::from_owners(1, &vec![0; m])));
    }
    if m < n {
        return Ok(bounded_star(instance, &star, &vec![zero(); n]));
    }
    for i in 0..n {
        if let Some(candidate) = central_candidate(instance, &star, i, aggregation) {
            if let Some(allocation) = ef_matching(instance, &candidate) {
                return Ok(Decision::Feasible(allocation));
            }
        }
    }
    Ok(Decision::Infeasible)
}

/// The central bundle for `i`, if conditions (i) and (ii) hold.
fn central_candidate(
    instance: &Instance,
    star: &StarShape,
    i: usize,
    aggregation: Aggregation,
) -> Option<CentralCandidate> {
    let (n, m) = (instance.agents(), instance.items());
    let mut by_cost: Vec<usize> = (0..m).collect();
    by_cost.sort_by(|&a, &b| instance.value(i, a).cmp(instance.value(i, b)));
    let keep = m - n + 1;
    let bundle: Vec<usize> = by_cost[..keep].to_vec();
    if !bundle.contains(&star.center) {
        return None;
    }
    if aggregation == Aggregation::Add {
        let sum = instance.aggregate_known(i, bundle.iter().copied());
        if &sum > instance.value(i, by_cost[keep]) {
            return None;
        }
    }
    Some(CentralCandidate { agent: i, bundle })
}

fn ef_matching(instance: &Instance, candidate: &CentralCandidate) -> Option<Allocation> {
    let (n, m) = (instance.agents(), instance.items());
    let i = candidate.agent;
    let rest_items: Vec<usize> = (0..m).filter(|v| !candidate.bundle.contains(v)).collect();
    let rest = others(instance, i);
    let mut graph = BipartiteGraph::new(rest.len(), rest_items.len());
    for (l, &j) in rest.iter().enumerate() {
        let central = instance.aggregate_known(j, candidate.bundle.iter().copied());
        let favourite = rest_items
            .iter()
            .map(|&v| instance.value(j, v))
            .min()
            .expect("n - 1 >= 1 items remain");
        for (r, &v) in rest_items.iter().enumerate() {
            let u = instance.value(j, v);
            if u <= favourite && u <= &central {
                graph.add_edge(l, r).expect("fresh edge");
            }
        }
    }
    let matching = max_cardinality_matching(&graph);
    if matching.size() < rest.len() {
        return None;
    }
    let mut owners = vec![i; m];
    for &(l, r) in &matching.pairs {
        owners[rest_items[r]] = rest[l];
    }
    Some(Allocation::from_owners(n, &owners))
}
