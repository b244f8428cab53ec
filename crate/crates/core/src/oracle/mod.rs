//! Exhaustive search over valid allocations.
//!
//! On paths the search enumerates contiguous blocks left to right, each
//! block going to a distinct agent. On other graphs it labels vertices in
//! breadth-first order and prunes any partial allocation in which some
//! bundle can no longer become connected. Both modes also prune on the
//! active fairness query using lower and upper bounds on each agent's
//! final bundle value.
//!
//! Disutilities are scaled to integers once per run, so the search itself
//! never touches big rationals. Instances whose scaled values do not fit
//! in 62 bits are rejected with [`OracleError::ValuesTooLarge`].
//!
//! Running out of nodes or time yields an explicit inconclusive outcome.
//! The first level of the search (owner of the first vertex or block) has
//! one branch per agent; [`Search::branch`] restricts a run to one of
//! them so callers can spread the branches over threads.

mod engine;

use core::ops::ControlFlow;
use core::time::Duration;

use crate::allocation::Allocation;
use crate::bits::Bits;
use crate::fairness::{check_fairness, FairnessQuery};
use crate::instance::Instance;
use crate::rational::Rational;

use engine::{Engine, Goal};

/// Node and time limits plus the zero-disutility restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    /// Enforced by the caller's [`Deadline`]; the core crate has no clock.
    pub time_limit: Option<Duration>,
    /// Only bundles of zero disutility for their owner are explored.
    pub zero_only: bool,
}

impl SearchBudget {
    pub const DEFAULT_MAX_NODES: u64 = 10_000_000;
    pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);

    pub fn unlimited() -> Self {
        SearchBudget {
            max_nodes: u64::MAX,
            time_limit: None,
            zero_only: false,
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn with_zero_only(mut self, zero_only: bool) -> Self {
        self.zero_only = zero_only;
        self
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_nodes == 0 || self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(OracleError::InvalidBudget);
        }
        Ok(())
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: Self::DEFAULT_MAX_NODES,
            time_limit: Some(Self::DEFAULT_TIME_LIMIT),
            zero_only: false,
        }
    }
}

/// Polled every few thousand nodes; `true` stops the search.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Never expires.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    NodeLimit,
    TimeLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the oracle handles at most {max} items, instance has {items}")]
    TooManyItems { items: usize, max: usize },
    #[error("disutilities or factor too large for exact integer search")]
    ValuesTooLarge,
    #[error("search limits must be positive")]
    InvalidBudget,
    #[error("branch {branch} does not exist; the instance has {agents} agents")]
    NoSuchBranch { branch: usize, agents: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub visited: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Every allocation in scope was visited.
    Exhausted(SearchStats),
    /// The visitor asked to stop.
    Stopped(SearchStats),
    Inconclusive(SearchStats, StopReason),
}

impl Enumeration {
    pub fn stats(&self) -> SearchStats {
        match self {
            Enumeration::Exhausted(s)
            | Enumeration::Stopped(s)
            | Enumeration::Inconclusive(s, _) => *s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Feasible(Allocation),
    Infeasible,
    Inconclusive(StopReason),
}

impl ExactOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ExactOutcome::Feasible(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinMaxOutcome {
    Optimal {
        value: Rational,
        allocation: Allocation,
    },
    /// The graph admits no valid allocation (it is disconnected and has
    /// more components than agents).
    NoAllocation,
    /// Budget ran out; `best` is the best allocation seen so far.
    Inconclusive {
        reason: StopReason,
        best: Option<(Rational, Allocation)>,
    },
}

/// Configurable search run over one instance.
pub struct Search<'a> {
    instance: &'a Instance,
    budget: SearchBudget,
    deadline: &'a dyn Deadline,
    branch: Option<usize>,
}

impl<'a> Search<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Search {
            instance,
            budget: SearchBudget::default(),
            deadline: &NoDeadline,
            branch: None,
        }
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn deadline(mut self, deadline: &'a dyn Deadline) -> Self {
        self.deadline = deadline;
        self
    }

    /// Restrict to allocations where `agent` owns the first vertex (the
    /// first block on a path).
    pub fn branch(mut self, agent: usize) -> Self {
        self.branch = Some(agent);
        self
    }

    fn engine<'v>(&self, goal: Goal<'v>) -> Result<Engine<'a, 'v>, OracleError> {
        self.budget.validate()?;
        if self.instance.items() > Bits::CAPACITY {
            return Err(OracleError::TooManyItems {
                items: self.instance.items(),
                max: Bits::CAPACITY,
            });
        }
        if let Some(branch) = self.branch {
            if branch >= self.instance.agents() {
                return Err(OracleError::NoSuchBranch {
                    branch,
                    agents: self.instance.agents(),
                });
            }
        }
        Engine::new(
            self.instance,
            &self.budget,
            self.deadline,
            self.branch,
            goal,
        )
    }

    pub fn enumerate<F>(&self, mut visitor: F) -> Result<Enumeration, OracleError>
    where
        F: FnMut(&Allocation) -> ControlFlow<()>,
    {
        let mut engine = self.engine(Goal::Enumerate(&mut visitor))?;
        let flow = engine.run();
        let stats = engine.stats();
        Ok(match (engine.stop_reason(), flow) {
            (Some(reason), _) => Enumeration::Inconclusive(stats, reason),
            (None, ControlFlow::Break(())) => Enumeration::Stopped(stats),
            (None, ControlFlow::Continue(())) => Enumeration::Exhausted(stats),
        })
    }

    pub fn solve(&self, query: &FairnessQuery) -> Result<ExactOutcome, OracleError> {
        let mut engine = self.engine(Goal::Query(query))?;
        let _ = engine.run();
        if let Some(found) = engine.take_found() {
            debug_assert!(check_fairness(self.instance, &found, query).is_fair());
            return Ok(ExactOutcome::Feasible(found));
        }
        Ok(match engine.stop_reason() {
            Some(reason) => ExactOutcome::Inconclusive(reason),
            None => ExactOutcome::Infeasible,
        })
    }

    pub fn min_max(&self) -> Result<MinMaxOutcome, OracleError> {
        let mut engine = self.engine(Goal::MinMax)?;
        let _ = engine.run();
        let best = engine.take_best();
        Ok(match (engine.stop_reason(), best) {
            (None, Some((value, allocation))) => MinMaxOutcome::Optimal { value, allocation },
            (None, None) => MinMaxOutcome::NoAllocation,
            (Some(reason), best) => MinMaxOutcome::Inconclusive { reason, best },
        })
    }
}

/// Visits every valid allocation (every zero-disutility one under
/// `budget.zero_only`) exactly once.
pub fn enumerate_valid_allocations<F>(
    instance: &Instance,
    budget: &SearchBudget,
    visitor: F,
) -> Result<Enumeration, OracleError>
where
    F: FnMut(&Allocation) -> ControlFlow<()>,
{
    Search::new(instance)
        .budget(budget.clone())
        .enumerate(visitor)
}

pub fn solve_exact(
    instance: &Instance,
    query: &FairnessQuery,
    budget: &SearchBudget,
) -> Result<ExactOutcome, OracleError> {
    Search::new(instance).budget(budget.clone()).solve(query)
}

/// Minimum over valid allocations of the largest bundle disutility.
pub fn min_max_disutility(
    instance: &Instance,
    budget: &SearchBudget,
) -> Result<MinMaxOutcome, OracleError> {
    Search::new(instance).budget(budget.clone()).min_max()
}

#[cfg(test)]
mod tests;
