//! Instance generators for the hardness constructions, together with the
//! forward witnesses built from a satisfying assignment or a partition.
//!
//! Every output carries ASCII label maps for chores and agents: `zbar2^1`
//! for the second variable's first negated literal chore, `b'3` for a
//! primed agent, `ytilde1` for a tilded chore and so on.

mod complete;
mod formula;
mod partition;
mod path;
mod star;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub use complete::{default_complete_epsilon, sat_to_complete_maxef, truth_to_complete_allocation};
pub use formula::{
    random_22e3sat, unsatisfiable_example, validate_22e3sat, Formula, FormulaReport,
    FormulaViolation, GenerateFormulaError, Literal, Occurrence,
};
pub use partition::{
    partition_to_star_addeq, partition_to_two_agent_ccd, partition_to_witness, PartitionInstance,
};
pub use path::{sat_to_path_ccd, sat_to_path_ccd_binary, truth_to_path_allocation};
pub use star::{default_star_epsilon, sat_to_star_addef, truth_to_star_allocation};

use crate::instance::{Instance, InstanceError};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("formula is not a (2,2)-E3-SAT formula: {} violation(s)", .0.violations.len())]
    InvalidFormula(FormulaReport),
    #[error("c * (5s + t) must be an integer")]
    NonIntegralDummies,
    #[error("c must be at least 1")]
    FactorBelowOne,
    #[error("epsilon is out of range")]
    EpsilonOutOfRange,
    #[error("assignment has {found} values for {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment does not satisfy the formula")]
    NotAModel,
    #[error("pair sum {sum} is not twice K = {k}")]
    PartitionSum { sum: u64, k: u64 },
    #[error("partition instance needs at least one pair of positive integers")]
    BadPairs,
    #[error("certificate does not split the pairs with sum K")]
    BadCertificate,
    #[error("multiset must be nonempty with an even positive total, got total {0}")]
    OddTotal(u64),
    #[error("reduction output was not produced by this construction")]
    WrongOutput,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Which construction produced an output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    PathZero,
    PathZeroBinary,
    CompleteMaxEf,
    StarAddEf,
    StarAddEq,
    TwoAgentPartition,
}

/// A generated instance with its chore and agent symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub construction: Construction,
    pub agent_labels: Vec<String>,
    pub c: Option<Rational>,
    pub epsilon: Option<Rational>,
    chore_ids: BTreeMap<String, usize>,
    agent_ids: BTreeMap<String, usize>,
}

impl ReductionOutput {
    fn new(
        instance: Instance,
        construction: Construction,
        agent_labels: Vec<String>,
        c: Option<Rational>,
        epsilon: Option<Rational>,
    ) -> Self {
        let chore_ids = index(instance.item_names());
        let agent_ids = index(&agent_labels);
        debug_assert_eq!(chore_ids.len(), instance.items(), "chore labels collide");
        debug_assert_eq!(agent_ids.len(), agent_labels.len(), "agent labels collide");
        ReductionOutput {
            instance,
            construction,
            agent_labels,
            c,
            epsilon,
            chore_ids,
            agent_ids,
        }
    }

    pub fn chore_labels(&self) -> &[String] {
        self.instance.item_names()
    }

    pub fn chore(&self, label: &str) -> Option<usize> {
        self.chore_ids.get(label).copied()
    }

    pub fn agent(&self, label: &str) -> Option<usize> {
        self.agent_ids.get(label).copied()
    }

    fn chore_id(&self, label: &str) -> usize {
        self.chore(label)
            .unwrap_or_else(|| panic!("no chore `{label}`"))
    }

    fn agent_id(&self, label: &str) -> usize {
        self.agent(label)
            .unwrap_or_else(|| panic!("no agent `{label}`"))
    }

    fn expect(&self, construction: Construction) -> Result<(), ReductionError> {
        if self.construction == construction {
            Ok(())
        } else {
            Err(ReductionError::WrongOutput)
        }
    }
}

fn index(labels: &[String]) -> BTreeMap<String, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect()
}

fn require_valid(formula: &Formula) -> Result<(), ReductionError> {
    let report = validate_22e3sat(formula);
    if report.is_valid() {
        Ok(())
    } else {
        Err(ReductionError::InvalidFormula(report))
    }
}

fn require_model(formula: &Formula, assignment: &[bool]) -> Result<(), ReductionError> {
    if assignment.len() != formula.vars() {
        return Err(ReductionError::AssignmentLength {
            expected: formula.vars(),
            found: assignment.len(),
        });
    }
    if formula.evaluate(assignment) {
        Ok(())
    } else {
        Err(ReductionError::NotAModel)
    }
}

/// Literal chore symbol: `z1^2`, `zbar3^1`.
fn literal_label(prefix: &str, occ: &Occurrence) -> String {
    let bar = if occ.literal.negated { "bar" } else { "" };
    alloc::format!("{prefix}{bar}{}^{}", occ.literal.var + 1, occ.k)
}

fn complete_edges(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect()
}
