//! Complete graphs under maximum aggregation. Every subset is connected,
//! so only the item-to-agent map matters.

use alloc::vec::Vec;

use crate::allocation::Allocation;
use crate::fairness::{Criterion, FairnessQuery};
use crate::instance::{Aggregation, Instance};
use crate::matchflow::{max_cardinality_matching, BipartiteGraph};
use crate::rational::Rational;
use crate::topology::is_complete;
use crate::{
    require_aggregation, require_chores, require_criterion, Decision, EquitableWitness, SolverError,
};

/// Each item to an agent of minimum disutility for it, lowest id on ties.
/// Under maximum aggregation this minimises the largest bundle value.
pub fn greedy_assign(instance: &Instance) -> Allocation {
    let owners: Vec<usize> = (0..instance.items())
        .map(|v| {
            (0..instance.agents())
                .min_by(|&a, &b| {
                    instance
                        .value(a, v)
                        .cmp(instance.value(b, v))
                        .then(a.cmp(&b))
                })
                .expect("at least one agent")
        })
        .collect();
    Allocation::from_owners(instance.agents(), &owners)
}

fn require_complete(instance: &Instance) -> Result<(), SolverError> {
    if is_complete(instance) {
        Ok(())
    } else {
        Err(SolverError::WrongTopology {
            expected: "complete",
        })
    }
}

/// Proportionality with bound `c * share_i` per agent, where the share is
/// the query's threshold or `T_i / n`.
///
/// Under maximum aggregation the bound holds iff every item in a bundle
/// is within it, so items are independent: each goes to the agent with
/// the smallest disutility among those for whom it is within bound. With
/// a common bound this is exactly [`greedy_assign`].
pub fn solve_max_prop_complete(
    instance: &Instance,
    query: &FairnessQuery,
) -> Result<Decision<Allocation>, SolverError> {
    require_complete(instance)?;
    require_aggregation(instance, Aggregation::Max)?;
    require_chores(instance)?;
    require_criterion(query, Criterion::Prop)?;
    let bounds: Vec<Rational> = (0..instance.agents())
        .map(|a| query.factor() * query.share(instance, a))
        .collect();
    let mut owners = Vec::with_capacity(instance.items());
    for v in 0..instance.items() {
        let best = (0..instance.agents())
            .filter(|&a| instance.value(a, v) <= &bounds[a])
            .min_by(|&a, &b| {
                instance
                    .value(a, v)
                    .cmp(instance.value(b, v))
                    .then(a.cmp(&b))
            });
        match best {
            Some(a) => owners.push(a),
            None => return Ok(Decision::Infeasible),
        }
    }
    Ok(Decision::Feasible(Allocation::from_owners(
        instance.agents(),
        &owners,
    )))
}

/// Exact equitability. Tries every common value `eta` from the table (and
/// 0) in ascending order and returns the smallest that works.
///
/// `eta = 0` works iff every chore is worth 0 to somebody; agents left
/// empty also sit at 0. For `eta > 0` every agent needs a chore worth
/// exactly `eta` to it (a matching covering all agents), and every other
/// chore must go to someone who values it at most `eta`.
pub fn solve_max_eq_complete(
    instance: &Instance,
) -> Result<Decision<EquitableWitness>, SolverError> {
    require_complete(instance)?;
    require_aggregation(instance, Aggregation::Max)?;
    require_chores(instance)?;
    let (n, m) = (instance.agents(), instance.items());
    for eta in instance.distinct_values() {
        let mut owners: Vec<Option<usize>> = alloc::vec![None; m];
        if eta > Rational::from_integer(0.into()) {
            if n > m {
                break;
            }
            let mut graph = BipartiteGraph::new(n, m);
            for a in 0..n {
                for v in 0..m {
                    if instance.value(a, v) == &eta {
                        graph.add_edge(a, v).expect("fresh edge");
                    }
                }
            }
            let matching = max_cardinality_matching(&graph);
            if matching.size() < n {
                continue;
            }
            for &(a, v) in &matching.pairs {
                owners[v] = Some(a);
            }
        }
        let mut complete = true;
        for (v, owner) in owners.iter_mut().enumerate() {
            if owner.is_some() {
                continue;
            }
            match (0..n)
                .filter(|&a| instance.value(a, v) <= &eta)
                .min_by(|&a, &b| {
                    instance
                        .value(a, v)
                        .cmp(instance.value(b, v))
                        .then(a.cmp(&b))
                }) {
                Some(a) => *owner = Some(a),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            let owners: Vec<usize> = owners.into_iter().map(|o| o.expect("assigned")).collect();
            return Ok(Decision::Feasible(EquitableWitness {
                eta,
                allocation: Allocation::from_owners(n, &owners),
            }));
        }
    }
    Ok(Decision::Infeasible)
}
