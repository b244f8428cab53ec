//! Picks a polynomial solver when the instance falls in a tractable class
//! and falls back to exhaustive search otherwise.

use std::fmt;

use chores_core::allocation::Allocation;
use chores_core::complete::{solve_max_eq_complete, solve_max_prop_complete};
use chores_core::fairness::{Criterion, FairnessQuery};
use chores_core::instance::{Aggregation, Instance, Polarity};
use chores_core::oracle::{ExactOutcome, OracleError, StopReason};
use chores_core::rational::Rational;
use chores_core::star::{
    solve_add_ef_star_strict, solve_add_prop_star, solve_max_ef_star_strict, solve_max_eq_star,
    solve_max_prop_star, solve_zero_star,
};
use chores_core::topology::{classify_topology, is_complete, star_center, TopologyKind};
use chores_core::{Decision, SolverError};

use crate::parallel::{solve_exact_parallel, OracleConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complexity {
    Polynomial,
    NpComplete,
    /// Polynomial when every agent ranks the items strictly.
    NpCompleteUnlessStrict,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Complexity::Polynomial => "polynomial",
            Complexity::NpComplete => "NP-complete",
            Complexity::NpCompleteUnlessStrict => {
                "NP-complete (polynomial with strict preferences)"
            }
        })
    }
}

/// Complexity of deciding existence of an exact fair allocation of chores.
/// Trees and general graphs contain paths, so they inherit hardness.
pub fn cell_complexity(
    kind: TopologyKind,
    criterion: Criterion,
    aggregation: Aggregation,
) -> Complexity {
    use Aggregation::{Add, Max};
    use Complexity::*;
    use Criterion::{Ef, Eq, Prop};
    match (kind, criterion, aggregation) {
        (TopologyKind::Complete, Prop | Eq, Max) => Polynomial,
        (TopologyKind::Star, Prop, _) => Polynomial,
        (TopologyKind::Star, Ef, _) => NpCompleteUnlessStrict,
        (TopologyKind::Star, Eq, Max) => Polynomial,
        (TopologyKind::Star, Eq, Add) => NpComplete,
        _ => NpComplete,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    MaxPropComplete,
    MaxEqComplete,
    AddPropStar,
    MaxPropStar,
    ZeroStar,
    MaxEqStar,
    AddEfStarStrict,
    MaxEfStarStrict,
    Oracle,
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverChoice::MaxPropComplete => "solve_max_prop_complete",
            SolverChoice::MaxEqComplete => "solve_max_eq_complete",
            SolverChoice::AddPropStar => "solve_add_prop_star",
            SolverChoice::MaxPropStar => "solve_max_prop_star",
            SolverChoice::ZeroStar => "solve_zero_star",
            SolverChoice::MaxEqStar => "solve_max_eq_star",
            SolverChoice::AddEfStarStrict => "solve_add_ef_star_strict",
            SolverChoice::MaxEfStarStrict => "solve_max_ef_star_strict",
            SolverChoice::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub choice: SolverChoice,
    pub topology: TopologyKind,
    pub complexity: Complexity,
    /// Set when the oracle is used; says why.
    pub warning: Option<String>,
}

pub fn route_solver(instance: &Instance, query: &FairnessQuery) -> Route {
    let topology = classify_topology(instance).kind();
    let aggregation = instance.aggregation();
    let criterion = query.criterion();
    let complexity = cell_complexity(topology, criterion, aggregation);
    let complete = is_complete(instance);
    let star = star_center(instance).is_some();
    let chores = instance.polarity() == Polarity::Chores;
    let zero_target = query
        .threshold()
        .is_some_and(|t| *t == chores_core::rational::int(0));
    let exact = query.is_exact() && query.threshold().is_none();

    let choice = match (criterion, aggregation) {
        _ if !chores => None,
        (Criterion::Prop, _) if star && zero_target => Some(SolverChoice::ZeroStar),
        (Criterion::Prop, Aggregation::Max) if complete => Some(SolverChoice::MaxPropComplete),
        (Criterion::Prop, Aggregation::Add) if star => Some(SolverChoice::AddPropStar),
        (Criterion::Prop, Aggregation::Max) if star => Some(SolverChoice::MaxPropStar),
        (Criterion::Eq, Aggregation::Max) if exact && complete => Some(SolverChoice::MaxEqComplete),
        (Criterion::Eq, Aggregation::Max) if exact && star => Some(SolverChoice::MaxEqStar),
        (Criterion::Ef, _) if exact && star && instance.first_tie().is_none() => {
            Some(match aggregation {
                Aggregation::Add => SolverChoice::AddEfStarStrict,
                Aggregation::Max => SolverChoice::MaxEfStarStrict,
            })
        }
        _ => None,
    };
    match choice {
        Some(choice) => Route {
            choice,
            topology,
            complexity: Complexity::Polynomial,
            warning: None,
        },
        None => {
            let reason = if !chores {
                String::from("no polynomial solver for goods")
            } else if complexity == Complexity::Polynomial
                || complexity == Complexity::NpCompleteUnlessStrict
            {
                format!("no polynomial solver for this query on a {topology} ({complexity} in the exact chores case)")
            } else {
                format!("{aggregation} {criterion} on a {topology} is {complexity}")
            };
            Route {
                choice: SolverChoice::Oracle,
                topology,
                complexity,
                warning: Some(format!("{reason}; using exhaustive search")),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible {
        allocation: Allocation,
        /// Common value of an equitable witness from a polynomial solver.
        eta: Option<Rational>,
    },
    Infeasible,
    Inconclusive(StopReason),
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn plain(decision: Decision<Allocation>) -> Verdict {
    match decision {
        Decision::Feasible(allocation) => Verdict::Feasible {
            allocation,
            eta: None,
        },
        Decision::Infeasible => Verdict::Infeasible,
    }
}

/// Runs the routed solver. The oracle is used with `config` when routed
/// there; `force_oracle` skips the polynomial solvers.
pub fn solve(
    instance: &Instance,
    query: &FairnessQuery,
    config: &OracleConfig,
    force_oracle: bool,
) -> Result<(Route, Verdict), SolveError> {
    let mut route = route_solver(instance, query);
    if force_oracle && route.choice != SolverChoice::Oracle {
        route.choice = SolverChoice::Oracle;
        route.warning = None;
    }
    let eq = |d: Decision<chores_core::EquitableWitness>| match d {
        Decision::Feasible(w) => Verdict::Feasible {
            allocation: w.allocation,
            eta: Some(w.eta),
        },
        Decision::Infeasible => Verdict::Infeasible,
    };
    let verdict = match route.choice {
        SolverChoice::MaxPropComplete => plain(solve_max_prop_complete(instance, query)?),
        SolverChoice::MaxEqComplete => eq(solve_max_eq_complete(instance)?),
        SolverChoice::AddPropStar => plain(solve_add_prop_star(instance, query)?),
        SolverChoice::MaxPropStar => plain(solve_max_prop_star(instance, query)?),
        SolverChoice::ZeroStar => plain(solve_zero_star(instance)?),
        SolverChoice::MaxEqStar => eq(solve_max_eq_star(instance)?),
        SolverChoice::AddEfStarStrict => plain(solve_add_ef_star_strict(instance)?),
        SolverChoice::MaxEfStarStrict => plain(solve_max_ef_star_strict(instance)?),
        SolverChoice::Oracle => match solve_exact_parallel(instance, query, config)? {
            ExactOutcome::Feasible(allocation) => Verdict::Feasible {
                allocation,
                eta: None,
            },
            ExactOutcome::Infeasible => Verdict::Infeasible,
            ExactOutcome::Inconclusive(reason) => Verdict::Inconclusive(reason),
        },
    };
    Ok((route, verdict))
}
