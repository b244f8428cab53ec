//! SAT to a path instance in which a satisfying assignment corresponds to
//! an allocation giving every agent disutility 0.
//!
//! Chores on the path: `y1..yt`, then for each variable `j` the block
//! `zj^1 zj^2 dj zbarj^1 zbarj^2`. Agents: literal agents `bj^k`,
//! `bbarj^k`, then `p1..ps`, `q1..qs` and dummies `r1..`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive, Zero};

use super::{
    literal_label, require_model, require_valid, Construction, Formula, ReductionError,
    ReductionOutput,
};
use crate::allocation::Allocation;
use crate::instance::{Aggregation, Instance, Polarity};
use crate::rational::Rational;

const BLOCK: [&str; 5] = ["z{}^1", "z{}^2", "d{}", "zbar{}^1", "zbar{}^2"];

fn block_labels(j: usize) -> [String; 5] {
    BLOCK.map(|pattern| pattern.replace("{}", &format!("{}", j + 1)))
}

/// Additive instance with `n = c(5s+t) + 1` agents; every row sums to 1.
///
/// The last clause chore is adjacent to `z1^1`. If a formula repeats `x1`
/// in its last clause, agent `b1^1` can take both, and an unsatisfiable
/// formula may still admit an all-zero allocation.
pub fn sat_to_path_ccd(formula: &Formula, c: &Rational) -> Result<ReductionOutput, ReductionError> {
    require_valid(formula)?;
    if c < &Rational::one() {
        return Err(ReductionError::FactorBelowOne);
    }
    let (s, t) = (formula.vars(), formula.clauses().len());
    let m = 5 * s + t;
    let scaled = c * Rational::from_integer(m.into());
    if !scaled.is_integer() {
        return Err(ReductionError::NonIntegralDummies);
    }
    let dummies = scaled.to_integer().to_usize().expect("dummy count fits") + 1 - 6 * s;

    let mut chores: Vec<String> = (1..=t).map(|i| format!("y{i}")).collect();
    for j in 0..s {
        chores.extend(block_labels(j));
    }
    let edges: Vec<(usize, usize)> = (1..m).map(|v| (v - 1, v)).collect();
    let id = |label: &str| chores.iter().position(|l| l == label).expect("known chore");

    let mut agents = Vec::new();
    let mut rows = Vec::new();
    let uniform = |zeros: &[usize]| -> Vec<Rational> {
        let share = Rational::new(1.into(), ((m - zeros.len()) as i64).into());
        (0..m)
            .map(|v| {
                if zeros.contains(&v) {
                    Rational::zero()
                } else {
                    share.clone()
                }
            })
            .collect()
    };

    // Literal agents in block order, so that each variable's four agents sit together.
    let occurrences = formula.occurrences();
    for j in 0..s {
        for negated in [false, true] {
            for k in 1..=2 {
                let occ = occurrences
                    .iter()
                    .find(|o| o.literal.var == j && o.literal.negated == negated && o.k == k)
                    .expect("two occurrences per sign");
                agents.push(literal_label("b", occ));
                rows.push(uniform(&[id(&literal_label("z", occ)), occ.clause]));
            }
        }
    }
    for j in 0..s {
        let [z1, z2, _, zb1, zb2] = block_labels(j);
        agents.push(format!("p{}", j + 1));
        rows.push(uniform(&[id(&z1), id(&z2), id(&zb1), id(&zb2)]));
    }
    for j in 0..s {
        agents.push(format!("q{}", j + 1));
        rows.push(uniform(&[id(&format!("d{}", j + 1))]));
    }
    for r in 1..=dummies {
        agents.push(format!("r{r}"));
        rows.push(uniform(&[]));
    }

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
        Construction::PathZero,
        agents,
        Some(c.clone()),
        None,
    ))
}

/// The maximum-aggregation variant: same layout, every positive
/// disutility replaced by 1.
pub fn sat_to_path_ccd_binary(
    formula: &Formula,
    c: &Rational,
) -> Result<ReductionOutput, ReductionError> {
    let base = sat_to_path_ccd(formula, c)?;
    let table = base
        .instance
        .table()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    if v.is_zero() {
                        Rational::zero()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect();
    let instance = Instance::with_names(
        base.instance.agents(),
        base.instance.item_names().to_vec(),
        base.instance.edges().to_vec(),
        table,
        Aggregation::Max,
        Polarity::Chores,
    )?;
    Ok(ReductionOutput::new(
        instance,
        Construction::PathZeroBinary,
        base.agent_labels,
        base.c,
        None,
    ))
}

/// The zero-disutility allocation of a model: `dj` to `qj`; `pj` takes the
/// false literal pair of its variable and the true literal agents take
/// their own literal chores; each clause chore goes to the agent of the
/// clause's first true literal; dummies stay empty.
pub fn truth_to_path_allocation(
    output: &ReductionOutput,
    formula: &Formula,
    assignment: &[bool],
) -> Result<Allocation, ReductionError> {
    if !matches!(
        output.construction,
        Construction::PathZero | Construction::PathZeroBinary
    ) {
        return Err(ReductionError::WrongOutput);
    }
    require_model(formula, assignment)?;
    let mut alloc = Allocation::empty(output.instance.agents());
    for (j, &value) in assignment.iter().enumerate() {
        let [z1, z2, d, zb1, zb2] = block_labels(j);
        let n = j + 1;
        alloc.assign(output.agent_id(&format!("q{n}")), output.chore_id(&d));
        let p = output.agent_id(&format!("p{n}"));
        let (taken, freed, owners) = if value {
            ([z1, z2], [zb1, zb2], "bbar")
        } else {
            ([zb1, zb2], [z1, z2], "b")
        };
        for chore in taken {
            alloc.assign(p, output.chore_id(&chore));
        }
        for (k, chore) in freed.iter().enumerate() {
            let agent = output.agent_id(&format!("{owners}{n}^{}", k + 1));
            alloc.assign(agent, output.chore_id(chore));
        }
    }
    for (i, clause) in formula.clauses().iter().enumerate() {
        let position = clause
            .iter()
            .position(|l| l.is_true(assignment))
            .expect("model satisfies every clause");
        let occ = formula.occurrence(i, position);
        alloc.assign(
            output.agent_id(&literal_label("b", &occ)),
            output.chore_id(&format!("y{}", i + 1)),
        );
    }
    Ok(alloc)
}

#[cfg(test)]
pub(super) fn zero_profile(output: &ReductionOutput, alloc: &Allocation) -> bool {
    (0..output.instance.agents()).all(|a| {
        output
            .instance
            .aggregate(a, alloc.bundle(a).iter().copied())
            .map(|v| v.is_zero())
            .unwrap_or(false)
    })
}
