//! Fair division of indivisible chores placed on a graph, where every
//! agent's bundle has to induce a connected subgraph.
//!
//! The crate is `no_std` (it needs `alloc`). It contains:
//!
//! - the instance / allocation model with exact rational disutilities,
//!   validity checking and the proportionality, envy-freeness and
//!   equitability checkers ([`instance`], [`allocation`], [`fairness`]);
//! - bipartite matching and integral max-flow engines ([`matchflow`]);
//! - an exhaustive search over valid allocations used as ground truth
//!   ([`oracle`]);
//! - polynomial solvers for complete graphs under maximum aggregation
//!   ([`complete`]) and for stars ([`star`]);
//! - instance generators for the hardness constructions ([`reductions`])
//!   and random instances ([`generate`]).
//!
//! File formats, solver routing and the command line live in the `chores`
//! companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod allocation;
pub mod complete;
pub mod fairness;
pub mod generate;
pub mod instance;
pub mod matchflow;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod star;
pub mod topology;

mod bits;

pub use allocation::{validate_allocation, Allocation, ValidityReport};
pub use fairness::{check_fairness, Criterion, FairnessQuery, FairnessReport, Violation};
pub use instance::{build_instance, Aggregation, Instance, InstanceError, Polarity, RawInstance};
pub use rational::Rational;
pub use topology::{classify_topology, Topology, TopologyKind};

/// Verdict of a polynomial decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W> {
    Feasible(W),
    Infeasible,
}

impl<W> Decision<W> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Feasible(w) => Some(w),
            Decision::Infeasible => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(W) -> U) -> Decision<U> {
        match self {
            Decision::Feasible(w) => Decision::Feasible(f(w)),
            Decision::Infeasible => Decision::Infeasible,
        }
    }
}

/// Witness of an equitable allocation together with its common value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableWitness {
    pub eta: Rational,
    pub allocation: Allocation,
}

/// Errors shared by the polynomial solvers.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("graph is not {expected}")]
    WrongTopology { expected: &'static str },
    #[error("solver requires {expected} aggregation")]
    WrongAggregation { expected: Aggregation },
    #[error("solver decides {expected} queries")]
    WrongCriterion { expected: Criterion },
    #[error("polynomial solvers only handle chores; goods instances go to the oracle")]
    GoodsUnsupported,
    #[error("agent {agent} has equal disutility for items {first} and {second}; preferences must be strict")]
    NotStrict {
        agent: usize,
        first: usize,
        second: usize,
    },
}

pub(crate) fn require_chores(instance: &Instance) -> Result<(), SolverError> {
    match instance.polarity() {
        Polarity::Chores => Ok(()),
        Polarity::Goods => Err(SolverError::GoodsUnsupported),
    }
}

pub(crate) fn require_aggregation(
    instance: &Instance,
    expected: Aggregation,
) -> Result<(), SolverError> {
    if instance.aggregation() == expected {
        Ok(())
    } else {
        Err(SolverError::WrongAggregation { expected })
    }
}

pub(crate) fn require_criterion(
    query: &FairnessQuery,
    expected: Criterion,
) -> Result<(), SolverError> {
    if query.criterion() == expected {
        Ok(())
    } else {
        Err(SolverError::WrongCriterion { expected })
    }
}
