//! SAT to envy-freeness on a complete graph under maximum aggregation.
//!
//! Chores in order: per variable `wj^1 wj^2 wbarj^1 wbarj^2`, then
//! `z1..zt`, `z'1..z't` and per variable `yj^1..yj^4`. The default
//! disutility of a chore is its 1-based position; each agent overrides a
//! few entries with 0 or epsilon. Agents: `b1..bt`, `b'1..b't`, `p1..ps`,
//! `q1^1..qs^4`. Rows are not normalized; envy-freeness does not care.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{
    complete_edges, literal_label, require_model, require_valid, Construction, Formula,
    ReductionError, ReductionOutput,
};
use crate::allocation::Allocation;
use crate::instance::{Aggregation, Instance, Polarity};
use crate::rational::Rational;

/// For `qj^k`: the two literal chores it ignores.
const Q_ZEROS: [(&str, &str); 4] = [
    ("w{}^1", "wbar{}^1"),
    ("w{}^1", "wbar{}^2"),
    ("w{}^2", "wbar{}^1"),
    ("w{}^2", "wbar{}^2"),
];

fn fill(pattern: &str, j: usize) -> String {
    pattern.replace("{}", &format!("{j}"))
}

/// Defaults to `epsilon = 1/2`.
pub fn default_complete_epsilon() -> Rational {
    Rational::new(1.into(), 2.into())
}

pub fn sat_to_complete_maxef(
    formula: &Formula,
    epsilon: &Rational,
) -> Result<ReductionOutput, ReductionError> {
    require_valid(formula)?;
    if !(epsilon > &Rational::zero() && epsilon < &Rational::one()) {
        return Err(ReductionError::EpsilonOutOfRange);
    }
    let (s, t) = (formula.vars(), formula.clauses().len());

    let mut chores = Vec::new();
    for j in 1..=s {
        chores.extend(["w{}^1", "w{}^2", "wbar{}^1", "wbar{}^2"].map(|p| fill(p, j)));
    }
    chores.extend((1..=t).map(|i| format!("z{i}")));
    chores.extend((1..=t).map(|i| format!("z'{i}")));
    for j in 1..=s {
        chores.extend((1..=4).map(|k| format!("y{j}^{k}")));
    }
    let m = chores.len();
    let id = |label: &str| chores.iter().position(|l| l == label).expect("known chore");
    let beta: Vec<Rational> = (1..=m).map(|p| Rational::from_integer(p.into())).collect();
    let row = |zeros: &[usize], eps: &[usize]| -> Vec<Rational> {
        (0..m)
            .map(|v| {
                if zeros.contains(&v) {
                    Rational::zero()
                } else if eps.contains(&v) {
                    epsilon.clone()
                } else {
                    beta[v].clone()
                }
            })
            .collect()
    };

    let occurrences = formula.occurrences();
    let mut agents = Vec::new();
    let mut rows = Vec::new();
    for i in 1..=t {
        let mut zeros = Vec::from([id(&format!("z{i}"))]);
        zeros.extend(
            occurrences
                .iter()
                .filter(|o| o.clause == i - 1)
                .map(|o| id(&literal_label("w", o))),
        );
        agents.push(format!("b{i}"));
        rows.push(row(&zeros, &[]));
    }
    for i in 1..=t {
        agents.push(format!("b'{i}"));
        rows.push(row(&[id(&format!("z{i}"))], &[id(&format!("z'{i}"))]));
    }
    for j in 1..=s {
        let zeros = ["w{}^1", "w{}^2", "wbar{}^1", "wbar{}^2"].map(|p| id(&fill(p, j)));
        agents.push(format!("p{j}"));
        rows.push(row(&zeros, &[]));
    }
    for j in 1..=s {
        for (k, (a, b)) in Q_ZEROS.iter().enumerate() {
            agents.push(format!("q{j}^{}", k + 1));
            rows.push(row(
                &[id(&fill(a, j)), id(&fill(b, j))],
                &[id(&format!("y{j}^{}", k + 1))],
            ));
        }
    }

    let instance = Instance::with_names(
        agents.len(),
        chores,
        complete_edges(m),
        rows,
        Aggregation::Max,
        Polarity::Chores,
    )?;
    Ok(ReductionOutput::new(
        instance,
        Construction::CompleteMaxEf,
        agents,
        None,
        Some(epsilon.clone()),
    ))
}

/// `pj` takes the literal chores of its variable that are false; `bi`
/// takes `zi` and the chores of the true literals of clause `i`; primed
/// agents and `qj^k` take their own `z'i` and `yj^k`.
pub fn truth_to_complete_allocation(
    output: &ReductionOutput,
    formula: &Formula,
    assignment: &[bool],
) -> Result<Allocation, ReductionError> {
    output.expect(Construction::CompleteMaxEf)?;
    require_model(formula, assignment)?;
    let mut alloc = Allocation::empty(output.instance.agents());
    for (j, &value) in assignment.iter().enumerate() {
        let j = j + 1;
        let pair = if value {
            ["wbar{}^1", "wbar{}^2"]
        } else {
            ["w{}^1", "w{}^2"]
        };
        for p in pair {
            alloc.assign(
                output.agent_id(&format!("p{j}")),
                output.chore_id(&fill(p, j)),
            );
        }
        for k in 1..=4 {
            alloc.assign(
                output.agent_id(&format!("q{j}^{k}")),
                output.chore_id(&format!("y{j}^{k}")),
            );
        }
    }
    for i in 1..=formula.clauses().len() {
        alloc.assign(
            output.agent_id(&format!("b{i}")),
            output.chore_id(&format!("z{i}")),
        );
        alloc.assign(
            output.agent_id(&format!("b'{i}")),
            output.chore_id(&format!("z'{i}")),
        );
    }
    for occ in formula.occurrences() {
        if occ.literal.is_true(assignment) {
            let agent = output.agent_id(&format!("b{}", occ.clause + 1));
            alloc.assign(agent, output.chore_id(&literal_label("w", &occ)));
        }
    }
    Ok(alloc)
}
