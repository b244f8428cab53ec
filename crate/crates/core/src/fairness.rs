//! Proportionality, envy-freeness and equitability, exact or up to a
//! multiplicative factor `c >= 1`.
//!
//! For chores, agent `i` with bundle value `f_i` and total `T_i` (sum of
//! the row under additive aggregation, its maximum under maximum
//! aggregation) is
//!
//! - proportional when `f_i <= c * T_i / n`,
//! - envy-free when `f_i <= c * u_i(bundle of j)` for every `j`,
//! - equitable when `f_i <= c * f_j` for every `j`.
//!
//! Goods reverse the first two (`c * f_i >= T_i / n`,
//! `c * f_i >= u_i(bundle of j)`); equitability is the same for both.
//! A common proportionality threshold may replace `T_i / n`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::allocation::{validate_allocation, Allocation, ValidityReport};
use crate::instance::{Instance, Polarity, UnknownName};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Prop,
    Ef,
    Eq,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Prop => "prop",
            Criterion::Ef => "ef",
            Criterion::Eq => "eq",
        })
    }
}

impl FromStr for Criterion {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "prop" | "proportionality" => Ok(Criterion::Prop),
            "ef" | "envy-freeness" => Ok(Criterion::Ef),
            "eq" | "equitability" => Ok(Criterion::Eq),
            _ => Err(UnknownName {
                what: "criterion",
                text: alloc::string::ToString::to_string(s),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("approximation factor must be at least 1, got {0}")]
pub struct FactorError(pub Rational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessQuery {
    criterion: Criterion,
    factor: Rational,
    threshold: Option<Rational>,
}

impl FairnessQuery {
    /// Exact query (`c = 1`).
    pub fn exact(criterion: Criterion) -> Self {
        FairnessQuery {
            criterion,
            factor: Rational::one(),
            threshold: None,
        }
    }

    pub fn new(criterion: Criterion, factor: Rational) -> Result<Self, FactorError> {
        if factor < Rational::one() {
            return Err(FactorError(factor));
        }
        Ok(FairnessQuery {
            criterion,
            factor,
            threshold: None,
        })
    }

    /// Common proportionality threshold used instead of `T_i / n`.
    pub fn with_threshold(mut self, threshold: Rational) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }

    pub fn threshold(&self) -> Option<&Rational> {
        self.threshold.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.factor.is_one()
    }

    /// Fair share of `agent` before applying the factor: the override if
    /// set, else `T_i / n`.
    pub fn share(&self, instance: &Instance, agent: usize) -> Rational {
        match &self.threshold {
            Some(t) => t.clone(),
            None => instance.total(agent) / Rational::from_integer(BigInt::from(instance.agents())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The agent's value is on the wrong side of `bound` (already scaled
    /// by the factor).
    Proportionality {
        agent: usize,
        value: Rational,
        bound: Rational,
    },
    /// `agent` envies `envied`; values are both from `agent`'s viewpoint.
    Envy {
        agent: usize,
        envied: usize,
        own: Rational,
        other: Rational,
    },
    /// `value > c * other_value`.
    Inequity {
        agent: usize,
        other: usize,
        value: Rational,
        other_value: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FairnessStatus {
    Fair,
    Unfair,
    /// The allocation is not valid; fairness was not evaluated.
    InvalidAllocation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub query: FairnessQuery,
    pub status: FairnessStatus,
    pub validity: ValidityReport,
    /// Each agent's value for its own bundle (empty when invalid).
    pub values: Vec<Rational>,
    pub violations: Vec<Violation>,
}

impl FairnessReport {
    pub fn is_fair(&self) -> bool {
        self.status == FairnessStatus::Fair
    }
}

pub fn check_fairness(
    instance: &Instance,
    allocation: &Allocation,
    query: &FairnessQuery,
) -> FairnessReport {
    let validity = validate_allocation(instance, allocation);
    if !validity.is_valid() {
        return FairnessReport {
            query: query.clone(),
            status: FairnessStatus::InvalidAllocation,
            validity,
            values: Vec::new(),
            violations: Vec::new(),
        };
    }
    let n = instance.agents();
    let c = query.factor();
    let goods = instance.polarity() == Polarity::Goods;
    let values: Vec<Rational> = (0..n)
        .map(|a| instance.aggregate_known(a, allocation.bundle(a).iter().copied()))
        .collect();
    let mut violations = Vec::new();
    match query.criterion() {
        Criterion::Prop => {
            for (agent, value) in values.iter().enumerate() {
                let share = query.share(instance, agent);
                let (ok, bound) = if goods {
                    let bound = &share / c;
                    (value >= &bound, bound)
                } else {
                    let bound = c * &share;
                    (value <= &bound, bound)
                };
                if !ok {
                    violations.push(Violation::Proportionality {
                        agent,
                        value: value.clone(),
                        bound,
                    });
                }
            }
        }
        Criterion::Ef => {
            for (agent, own) in values.iter().enumerate() {
                for envied in (0..n).filter(|&j| j != agent) {
                    let other =
                        instance.aggregate_known(agent, allocation.bundle(envied).iter().copied());
                    let ok = if goods {
                        c * own >= other
                    } else {
                        *own <= c * &other
                    };
                    if !ok {
                        violations.push(Violation::Envy {
                            agent,
                            envied,
                            own: own.clone(),
                            other,
                        });
                    }
                }
            }
        }
        Criterion::Eq => {
            for agent in 0..n {
                for other in (0..n).filter(|&j| j != agent) {
                    if values[agent] > c * &values[other] {
                        violations.push(Violation::Inequity {
                            agent,
                            other,
                            value: values[agent].clone(),
                            other_value: values[other].clone(),
                        });
                    }
                }
            }
        }
    }
    FairnessReport {
        query: query.clone(),
        status: if violations.is_empty() {
            FairnessStatus::Fair
        } else {
            FairnessStatus::Unfair
        },
        validity,
        values,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Aggregation;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn path(rows: &[[i64; 4]], polarity: Polarity) -> Instance {
        Instance::new(
            3,
            4,
            vec![(0, 1), (1, 2), (2, 3)],
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            Aggregation::Add,
            polarity,
        )
        .unwrap()
    }

    #[test]
    fn known_envy_free_chore_allocation() {
        let inst = path(
            &[[6, 4, 0, 0], [7, 0, 1, 2], [0, 5, 5, 0]],
            Polarity::Chores,
        );
        let alloc = Allocation::from_bundles([vec![2, 3], vec![1], vec![0]]);
        let report = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Ef));
        assert!(report.is_fair(), "{report:?}");
    }

    #[test]
    fn known_proportional_goods_allocation() {
        let inst = path(
            &[[4, 6, 10, 10], [3, 10, 9, 8], [5, 10, 10, 5]],
            Polarity::Goods,
        );
        let alloc = Allocation::from_bundles([vec![3], vec![0, 1], vec![2]]);
        let report = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Prop));
        assert!(report.is_fair(), "{report:?}");
        // The same allocation read as chores is far from proportional.
        let chores = inst.with_polarity(Polarity::Chores);
        assert!(!check_fairness(&chores, &alloc, &FairnessQuery::exact(Criterion::Prop)).is_fair());
    }

    #[test]
    fn single_agent_is_envy_free() {
        let inst = Instance::new(
            1,
            2,
            vec![(0, 1)],
            vec![vec![int(3), int(4)]],
            Aggregation::Add,
            Polarity::Chores,
        )
        .unwrap();
        let alloc = Allocation::from_bundles([vec![0, 1]]);
        assert!(check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Ef)).is_fair());
    }

    #[test]
    fn reports_every_violating_pair() {
        let inst = path(
            &[[6, 4, 0, 0], [7, 0, 1, 2], [5, 0, 0, 5]],
            Polarity::Chores,
        );
        let alloc = Allocation::from_bundles([vec![0, 1, 2, 3], vec![], vec![]]);
        let ef = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Ef));
        assert_eq!(ef.violations.len(), 2);
        let eq = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Eq));
        assert_eq!(eq.violations.len(), 2);
        let prop = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Prop));
        assert_eq!(
            prop.violations,
            vec![Violation::Proportionality {
                agent: 0,
                value: int(10),
                bound: ratio(10, 3)
            }]
        );
    }

    #[test]
    fn factor_relaxes_bounds() {
        let inst = path(
            &[[6, 4, 0, 0], [7, 0, 1, 2], [5, 0, 0, 5]],
            Polarity::Chores,
        );
        // Agent 3 takes v1 at 5 > 10/3, but 5 <= (3/2) * 10/3.
        let alloc = Allocation::from_bundles([vec![2, 3], vec![1], vec![0]]);
        assert!(!check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Prop)).is_fair());
        let relaxed = FairnessQuery::new(Criterion::Prop, ratio(3, 2)).unwrap();
        assert!(check_fairness(&inst, &alloc, &relaxed).is_fair());
        assert!(FairnessQuery::new(Criterion::Prop, ratio(1, 2)).is_err());
    }

    #[test]
    fn threshold_override_replaces_fair_share() {
        let inst = path(
            &[[6, 4, 0, 0], [7, 0, 1, 2], [5, 0, 0, 5]],
            Polarity::Chores,
        );
        let alloc = Allocation::from_bundles([vec![2, 3], vec![1], vec![0]]);
        let q = FairnessQuery::exact(Criterion::Prop).with_threshold(int(5));
        assert!(check_fairness(&inst, &alloc, &q).is_fair());
    }

    #[test]
    fn invalid_allocation_is_reported_not_judged() {
        let inst = path(
            &[[6, 4, 0, 0], [7, 0, 1, 2], [5, 0, 0, 5]],
            Polarity::Chores,
        );
        let alloc = Allocation::from_bundles([vec![0, 3], vec![1, 2], vec![]]);
        let report = check_fairness(&inst, &alloc, &FairnessQuery::exact(Criterion::Ef));
        assert_eq!(report.status, FairnessStatus::InvalidAllocation);
        assert!(!report.is_fair());
    }
}
