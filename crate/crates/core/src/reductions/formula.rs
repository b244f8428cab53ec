//! CNF formulas with exactly three literals per clause in which every
//! variable occurs twice positively and twice negatively.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

/// Variable ids are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn is_true(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    vars: usize,
    clauses: Vec<Vec<Literal>>,
}

/// One literal occurrence. `k` (1 or 2) numbers the positive and the
/// negative occurrences of a variable separately, in clause order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub literal: Literal,
    pub k: usize,
    pub clause: usize,
    pub position: usize,
}

impl Formula {
    /// No structural checks; see [`validate_22e3sat`].
    pub fn new(vars: usize, clauses: Vec<Vec<Literal>>) -> Self {
        Formula { vars, clauses }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.vars
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.var < self.vars && l.is_true(assignment)))
    }

    /// First satisfying assignment in binary counting order, if any.
    /// Intended for small formulas only (at most 30 variables).
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.vars <= 30, "brute force over {} variables", self.vars);
        (0u64..1 << self.vars)
            .map(|mask| {
                (0..self.vars)
                    .map(|v| mask >> v & 1 == 1)
                    .collect::<Vec<bool>>()
            })
            .find(|a| self.evaluate(a))
    }

    /// Every literal occurrence, in clause then position order.
    pub fn occurrences(&self) -> Vec<Occurrence> {
        let mut seen = vec![[0usize; 2]; self.vars];
        let mut out = Vec::new();
        for (clause, lits) in self.clauses.iter().enumerate() {
            for (position, &literal) in lits.iter().enumerate() {
                let slot = &mut seen[literal.var][literal.negated as usize];
                *slot += 1;
                out.push(Occurrence {
                    literal,
                    k: *slot,
                    clause,
                    position,
                });
            }
        }
        out
    }

    /// Occurrence at `(clause, position)`.
    pub fn occurrence(&self, clause: usize, position: usize) -> Occurrence {
        self.occurrences()
            .into_iter()
            .find(|o| o.clause == clause && o.position == position)
            .expect("occurrence in range")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaViolation {
    ClauseSize {
        clause: usize,
        size: usize,
    },
    UnknownVariable {
        clause: usize,
        var: usize,
    },
    Occurrences {
        var: usize,
        positive: usize,
        negative: usize,
    },
    /// `3t = 4s` fails.
    Shape {
        vars: usize,
        clauses: usize,
    },
}

impl fmt::Display for FormulaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaViolation::ClauseSize { clause, size } => {
                write!(f, "clause {} has {size} literals, expected 3", clause + 1)
            }
            FormulaViolation::UnknownVariable { clause, var } => {
                write!(f, "clause {} uses unknown variable x{}", clause + 1, var + 1)
            }
            FormulaViolation::Occurrences { var, positive, negative } => write!(
                f,
                "x{} occurs {positive} times positively and {negative} times negatively, expected 2 and 2",
                var + 1
            ),
            FormulaViolation::Shape { vars, clauses } => {
                write!(f, "{clauses} clauses over {vars} variables violates 3t = 4s")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaReport {
    pub violations: Vec<FormulaViolation>,
}

impl FormulaReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_22e3sat(formula: &Formula) -> FormulaReport {
    let mut violations = Vec::new();
    let mut counts = vec![[0usize; 2]; formula.vars()];
    for (clause, lits) in formula.clauses().iter().enumerate() {
        if lits.len() != 3 {
            violations.push(FormulaViolation::ClauseSize {
                clause,
                size: lits.len(),
            });
        }
        for l in lits {
            match counts.get_mut(l.var) {
                Some(c) => c[l.negated as usize] += 1,
                None => violations.push(FormulaViolation::UnknownVariable { clause, var: l.var }),
            }
        }
    }
    for (var, [positive, negative]) in counts.into_iter().enumerate() {
        if positive != 2 || negative != 2 {
            violations.push(FormulaViolation::Occurrences {
                var,
                positive,
                negative,
            });
        }
    }
    if 3 * formula.clauses().len() != 4 * formula.vars() {
        violations.push(FormulaViolation::Shape {
            vars: formula.vars(),
            clauses: formula.clauses().len(),
        });
    }
    FormulaReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenerateFormulaError {
    #[error("the number of variables must be a positive multiple of 3, got {0}")]
    BadVariableCount(usize),
    #[error("no formula without repeated variables found after {0} attempts")]
    GaveUp(usize),
}

/// Random formula with `vars` variables. The `4 * vars` literal slots
/// (two positive and two negative per variable) are matched to clause
/// slots by a uniform random permutation. Unless `allow_repeats`, clauses
/// mentioning a variable twice are rejected and the draw is repeated.
pub fn random_22e3sat<R: Rng + ?Sized>(
    vars: usize,
    allow_repeats: bool,
    rng: &mut R,
) -> Result<Formula, GenerateFormulaError> {
    const ATTEMPTS: usize = 10_000;
    if vars == 0 || !vars.is_multiple_of(3) {
        return Err(GenerateFormulaError::BadVariableCount(vars));
    }
    let mut slots: Vec<Literal> = (0..vars)
        .flat_map(|v| {
            [
                Literal::pos(v),
                Literal::pos(v),
                Literal::neg(v),
                Literal::neg(v),
            ]
        })
        .collect();
    for _ in 0..ATTEMPTS {
        slots.shuffle(rng);
        let clauses: Vec<Vec<Literal>> = slots.chunks(3).map(|c| c.to_vec()).collect();
        let repeats = clauses
            .iter()
            .any(|c| c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var);
        if allow_repeats || !repeats {
            return Ok(Formula::new(vars, clauses));
        }
    }
    Err(GenerateFormulaError::GaveUp(ATTEMPTS))
}

/// A fixed unsatisfiable formula with three variables:
/// `(x1 | x1 | x2) (-x1 | -x1 | x2) (x3 | x3 | -x2) (-x3 | -x3 | -x2)`.
/// The first two clauses force `x2`, the last two then contradict.
pub fn unsatisfiable_example() -> Formula {
    let (p, n) = (Literal::pos, Literal::neg);
    Formula::new(
        3,
        vec![
            vec![p(0), p(0), p(1)],
            vec![n(0), n(0), p(1)],
            vec![p(2), p(2), n(1)],
            vec![n(2), n(2), n(1)],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_formulas_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for vars in [3, 6, 9] {
            let f = random_22e3sat(vars, false, &mut rng).unwrap();
            assert!(validate_22e3sat(&f).is_valid());
            assert_eq!(f.clauses().len(), vars * 4 / 3);
        }
    }

    #[test]
    fn reports_violations() {
        let short = Formula::new(3, vec![vec![Literal::pos(0), Literal::neg(0)]]);
        let report = validate_22e3sat(&short);
        assert!(report
            .violations
            .contains(&FormulaViolation::ClauseSize { clause: 0, size: 2 }));
        let two = Formula::new(2, vec![]);
        assert!(validate_22e3sat(&two)
            .violations
            .iter()
            .any(|v| matches!(v, FormulaViolation::Shape { .. })));
        assert_eq!(
            random_22e3sat(2, false, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(GenerateFormulaError::BadVariableCount(2))
        );
    }

    #[test]
    fn unsatisfiable_example_is_valid_and_unsat() {
        let f = unsatisfiable_example();
        assert!(validate_22e3sat(&f).is_valid());
        assert_eq!(f.brute_force(), None);
    }

    #[test]
    fn occurrences_are_numbered_per_sign() {
        let f = unsatisfiable_example();
        let occ = f.occurrences();
        assert_eq!((occ[0].k, occ[1].k), (1, 2));
        assert_eq!(f.occurrence(1, 2).literal, Literal::pos(1));
        assert_eq!(f.occurrence(1, 2).k, 2);
        assert_eq!(f.occurrence(3, 2).k, 2);
    }
}
