//! PARTITION to equitability on a star, and the two-agent split on a
//! complete graph.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{complete_edges, Construction, ReductionError, ReductionOutput};
use crate::allocation::Allocation;
use crate::instance::{Aggregation, Instance, Polarity};
use crate::rational::Rational;

/// Pairs `(a_i, b_i)` of positive integers with `sum(a_i + b_i) = 2K`.
/// The question is whether some set `P` of indices has
/// `sum_{i in P} a_i + sum_{i not in P} b_i = K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    pairs: Vec<(u64, u64)>,
    k: u64,
}

impl PartitionInstance {
    /// Derives `K` from the pair sum, which must be even.
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self, ReductionError> {
        let sum = pair_sum(&pairs)?;
        if sum % 2 != 0 {
            return Err(ReductionError::PartitionSum { sum, k: sum / 2 });
        }
        Ok(PartitionInstance { pairs, k: sum / 2 })
    }

    pub fn with_k(pairs: Vec<(u64, u64)>, k: u64) -> Result<Self, ReductionError> {
        let sum = pair_sum(&pairs)?;
        if Some(sum) != k.checked_mul(2) {
            return Err(ReductionError::PartitionSum { sum, k });
        }
        Ok(PartitionInstance { pairs, k })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `in_p[i]` says whether index `i` lies in `P`.
    pub fn is_certificate(&self, in_p: &[bool]) -> bool {
        in_p.len() == self.pairs.len()
            && self
                .pairs
                .iter()
                .zip(in_p)
                .map(|(&(a, b), &p)| if p { a } else { b })
                .sum::<u64>()
                == self.k
    }
}

fn pair_sum(pairs: &[(u64, u64)]) -> Result<u64, ReductionError> {
    if pairs.is_empty() || pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
        return Err(ReductionError::BadPairs);
    }
    pairs
        .iter()
        .try_fold(0u64, |acc, &(a, b)| acc.checked_add(a)?.checked_add(b))
        .ok_or(ReductionError::BadPairs)
}

fn frac(n: u64, d: u64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Star with center `c`, chores `d`, `v1 w1 .. vp wp`; agents `j0`,
/// `j1..jp` and `j{p+1}`. An equitable allocation exists iff the
/// partition instance is a yes-instance, with common value 1/3.
pub fn partition_to_star_addeq(pp: &PartitionInstance) -> Result<ReductionOutput, ReductionError> {
    let p = pp.pairs.len() as u64;
    let six_k = 6 * pp.k;
    let mut chores: Vec<String> = Vec::from([String::from("c"), String::from("d")]);
    for i in 1..=p {
        chores.push(format!("v{i}"));
        chores.push(format!("w{i}"));
    }
    let m = chores.len();
    let third = frac(1, 3);

    let mut rows = Vec::new();
    let mut j0 = Vec::from([frac(1, 6), frac(1, 2)]);
    for &(a, b) in &pp.pairs {
        j0.push(frac(a, six_k));
        j0.push(frac(b, six_k));
    }
    rows.push(j0);
    for i in 0..p as usize {
        let mut row = alloc::vec![Rational::zero(); m];
        for v in [0, 2 + 2 * i, 3 + 2 * i] {
            row[v] = third.clone();
        }
        rows.push(row);
    }
    let mut last = alloc::vec![frac(2, 6 * p + 3); m];
    last[1] = third;
    rows.push(last);

    let agents: Vec<String> = (0..=p + 1).map(|i| format!("j{i}")).collect();
    let edges = (1..m).map(|v| (0, v)).collect();
    let instance = Instance::with_names(
        agents.len(),
        chores,
        edges,
        rows,
        Aggregation::Add,
        Polarity::Chores,
    )?;
    Ok(ReductionOutput::new(
        instance,
        Construction::StarAddEq,
        agents,
        None,
        None,
    ))
}

/// `j0` takes `c`, `vi` for `i in P` and `wi` otherwise; `ji` takes the
/// other chore of its pair; `j{p+1}` takes `d`. Every agent ends at 1/3.
pub fn partition_to_witness(
    output: &ReductionOutput,
    pp: &PartitionInstance,
    in_p: &[bool],
) -> Result<Allocation, ReductionError> {
    output.expect(Construction::StarAddEq)?;
    if !pp.is_certificate(in_p) || output.instance.agents() != pp.pairs.len() + 2 {
        return Err(ReductionError::BadCertificate);
    }
    let mut alloc = Allocation::empty(output.instance.agents());
    let j0 = output.agent_id("j0");
    alloc.assign(j0, output.chore_id("c"));
    for (i, &p) in in_p.iter().enumerate() {
        let n = i + 1;
        let (mine, theirs) = if p { ("v", "w") } else { ("w", "v") };
        alloc.assign(j0, output.chore_id(&format!("{mine}{n}")));
        alloc.assign(
            output.agent_id(&format!("j{n}")),
            output.chore_id(&format!("{theirs}{n}")),
        );
    }
    alloc.assign(
        output.agent_id(&format!("j{}", in_p.len() + 1)),
        output.chore_id("d"),
    );
    Ok(alloc)
}

/// Two agents with identical additive rows proportional to `values` on a
/// complete graph. Proportional, envy-free and equitable allocations all
/// exist iff the multiset splits into two halves of equal sum.
pub fn partition_to_two_agent_ccd(values: &[u64]) -> Result<ReductionOutput, ReductionError> {
    let total = values
        .iter()
        .try_fold(0u64, |acc, &v| acc.checked_add(v))
        .ok_or(ReductionError::OddTotal(u64::MAX))?;
    if total == 0 || total % 2 != 0 {
        return Err(ReductionError::OddTotal(total));
    }
    let row: Vec<Rational> = values.iter().map(|&v| frac(v, total)).collect();
    let chores: Vec<String> = (1..=values.len()).map(|i| format!("v{i}")).collect();
    let agents = Vec::from([String::from("a1"), String::from("a2")]);
    let instance = Instance::with_names(
        2,
        chores,
        complete_edges(values.len()),
        alloc::vec![row.clone(), row],
        Aggregation::Add,
        Polarity::Chores,
    )?;
    Ok(ReductionOutput::new(
        instance,
        Construction::TwoAgentPartition,
        agents,
        None,
        None,
    ))
}
