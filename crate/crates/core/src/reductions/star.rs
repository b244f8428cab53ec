//! SAT to envy-freeness on a star under additive aggregation.
//!
//! Chores: the center `c`, then `d`, `yi ybari ytildei` per variable and
//! the literal chores `zj^1 zj^2 zbarj^1 zbarj^2`. Agents: clause agents
//! `b1..bt`, variable agents `p1..ps` and `q1..qs`, then `e` and `r`.
//! The rows of `pi` and `qi` sum to `1 + epsilon`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{
    literal_label, require_model, require_valid, Construction, Formula, ReductionError,
    ReductionOutput,
};
use crate::allocation::Allocation;
use crate::instance::{Aggregation, Instance, Polarity};
use crate::rational::Rational;

fn frac(n: usize, d: usize) -> Rational {
    Rational::new((n as i64).into(), (d as i64).into())
}

/// Defaults to `epsilon = 1/(14s)`.
pub fn default_star_epsilon(formula: &Formula) -> Rational {
    frac(1, 14 * formula.vars().max(1))
}

pub fn sat_to_star_addef(
    formula: &Formula,
    epsilon: &Rational,
) -> Result<ReductionOutput, ReductionError> {
    require_valid(formula)?;
    let (s, t) = (formula.vars(), formula.clauses().len());
    let one = Rational::from_integer(1.into());
    let filler = (&one - epsilon) / frac(7 * s - 3, 1);
    if !(epsilon > &Rational::zero() && epsilon < &filler) {
        return Err(ReductionError::EpsilonOutOfRange);
    }

    let mut chores = Vec::from([String::from("c"), String::from("d")]);
    for i in 1..=s {
        chores.extend([format!("y{i}"), format!("ybar{i}"), format!("ytilde{i}")]);
    }
    for j in 1..=s {
        chores.extend(
            ["z{}^1", "z{}^2", "zbar{}^1", "zbar{}^2"].map(|p| p.replace("{}", &format!("{j}"))),
        );
    }
    let m = chores.len();
    let id = |label: &str| chores.iter().position(|l| l == label).expect("known chore");
    let d = id("d");
    let edges = (1..m).map(|v| (0, v)).collect();

    let row = |special: &[(usize, Rational)], other: &Rational| -> Vec<Rational> {
        (0..m)
            .map(|v| {
                special
                    .iter()
                    .find(|(u, _)| *u == v)
                    .map_or_else(|| other.clone(), |(_, x)| x.clone())
            })
            .collect()
    };
    let zero = Rational::zero();

    let occurrences = formula.occurrences();
    let mut agents = Vec::new();
    let mut rows = Vec::new();
    for i in 0..t {
        let mut special = Vec::from([(d, zero.clone())]);
        special.extend(
            occurrences
                .iter()
                .filter(|o| o.clause == i)
                .map(|o| (id(&literal_label("z", o)), zero.clone())),
        );
        agents.push(format!("b{}", i + 1));
        rows.push(row(&special, &frac(1, 7 * s - 2)));
    }
    for (name, own, literal) in [("p", "y", "zbar"), ("q", "ybar", "z")] {
        for i in 1..=s {
            let special = [
                (id(&format!("{own}{i}")), zero.clone()),
                (id(&format!("{literal}{i}^1")), zero.clone()),
                (id(&format!("{literal}{i}^2")), zero.clone()),
                (id(&format!("ytilde{i}")), epsilon.clone()),
                (d, epsilon.clone()),
            ];
            agents.push(format!("{name}{i}"));
            rows.push(row(&special, &filler));
        }
    }
    let mut e_special = Vec::from([(d, frac(1, s + 1))]);
    e_special.extend((1..=s).map(|i| (id(&format!("ytilde{i}")), frac(1, s + 1))));
    agents.push(String::from("e"));
    rows.push(row(&e_special, &zero));
    agents.push(String::from("r"));
    rows.push(row(&[(d, zero.clone())], &frac(1, 7 * s + 1)));

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
        Construction::StarAddEf,
        agents,
        None,
        Some(epsilon.clone()),
    ))
}

/// True `xi`: `ytildei` to `pi`, `ybari` to `qi`. False: `yi` to `pi`,
/// `ytildei` to `qi`. Each clause agent takes the chore of its first true
/// literal, `d` goes to `r` and everything left, the center included, to `e`.
pub fn truth_to_star_allocation(
    output: &ReductionOutput,
    formula: &Formula,
    assignment: &[bool],
) -> Result<Allocation, ReductionError> {
    output.expect(Construction::StarAddEf)?;
    require_model(formula, assignment)?;
    let mut owners: Vec<Option<usize>> = alloc::vec![None; output.instance.items()];
    for (i, &value) in assignment.iter().enumerate() {
        let i = i + 1;
        let (to_p, to_q) = if value {
            ("ytilde", "ybar")
        } else {
            ("y", "ytilde")
        };
        owners[output.chore_id(&format!("{to_p}{i}"))] = Some(output.agent_id(&format!("p{i}")));
        owners[output.chore_id(&format!("{to_q}{i}"))] = Some(output.agent_id(&format!("q{i}")));
    }
    for (i, clause) in formula.clauses().iter().enumerate() {
        let position = clause
            .iter()
            .position(|l| l.is_true(assignment))
            .expect("model satisfies every clause");
        let occ = formula.occurrence(i, position);
        owners[output.chore_id(&literal_label("z", &occ))] =
            Some(output.agent_id(&format!("b{}", i + 1)));
    }
    owners[output.chore_id("d")] = Some(output.agent_id("r"));
    let e = output.agent_id("e");
    let owners: Vec<usize> = owners.into_iter().map(|o| o.unwrap_or(e)).collect();
    Ok(Allocation::from_owners(output.instance.agents(), &owners))
}
