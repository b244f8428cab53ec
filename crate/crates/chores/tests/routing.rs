use chores::parallel::OracleConfig;
use chores::route::{cell_complexity, route_solver, solve, Complexity, SolverChoice, Verdict};
use chores_core::fairness::{check_fairness, Criterion, FairnessQuery};
use chores_core::generate::{make_strict, random_instance, InstanceShape};
use chores_core::instance::{Aggregation, Instance, Polarity};
use chores_core::oracle::{solve_exact, SearchBudget};
use chores_core::rational::int;
use chores_core::topology::TopologyKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KINDS: [TopologyKind; 3] = [
    TopologyKind::Path,
    TopologyKind::Star,
    TopologyKind::Complete,
];
const CRITERIA: [Criterion; 3] = [Criterion::Prop, Criterion::Ef, Criterion::Eq];
const AGGREGATIONS: [Aggregation; 2] = [Aggregation::Add, Aggregation::Max];

fn instance(kind: TopologyKind, agg: Aggregation, strict: bool, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&InstanceShape::new(kind, 3, 5).aggregation(agg), &mut rng).unwrap();
    if strict {
        make_strict(&inst, &mut rng)
    } else {
        inst
    }
}

fn expected(kind: TopologyKind, criterion: Criterion, agg: Aggregation) -> Option<SolverChoice> {
    use SolverChoice::*;
    match (kind, criterion, agg) {
        (TopologyKind::Complete, Criterion::Prop, Aggregation::Max) => Some(MaxPropComplete),
        (TopologyKind::Complete, Criterion::Eq, Aggregation::Max) => Some(MaxEqComplete),
        (TopologyKind::Star, Criterion::Prop, Aggregation::Add) => Some(AddPropStar),
        (TopologyKind::Star, Criterion::Prop, Aggregation::Max) => Some(MaxPropStar),
        (TopologyKind::Star, Criterion::Eq, Aggregation::Max) => Some(MaxEqStar),
        (TopologyKind::Star, Criterion::Ef, Aggregation::Add) => Some(AddEfStarStrict),
        (TopologyKind::Star, Criterion::Ef, Aggregation::Max) => Some(MaxEfStarStrict),
        _ => None,
    }
}

#[test]
fn all_eighteen_cells() {
    for kind in KINDS {
        for criterion in CRITERIA {
            for agg in AGGREGATIONS {
                let inst = instance(kind, agg, true, 3);
                let route = route_solver(&inst, &FairnessQuery::exact(criterion));
                let complexity = cell_complexity(kind, criterion, agg);
                match expected(kind, criterion, agg) {
                    Some(choice) => {
                        assert_eq!(route.choice, choice, "{kind} {criterion} {agg}");
                        assert!(route.warning.is_none());
                        assert_ne!(complexity, Complexity::NpComplete);
                    }
                    None => {
                        assert_eq!(
                            route.choice,
                            SolverChoice::Oracle,
                            "{kind} {criterion} {agg}"
                        );
                        assert_eq!(
                            complexity,
                            Complexity::NpComplete,
                            "{kind} {criterion} {agg}"
                        );
                        assert!(route.warning.unwrap().contains("NP-complete"));
                    }
                }
            }
        }
    }
}

#[test]
fn star_ef_with_ties_uses_the_oracle() {
    let inst = chores::format::parse_instance(
        r#"{"agents": 2, "aggregation": "add", "items": 4, "edges": [[0, 1], [0, 2], [0, 3]],
            "disutility": [["1", "1", "1", "1"], ["1", "2", "3", "4"]]}"#,
    )
    .unwrap();
    let route = route_solver(&inst, &FairnessQuery::exact(Criterion::Ef));
    assert_eq!(route.choice, SolverChoice::Oracle);
    assert_eq!(route.complexity, Complexity::NpCompleteUnlessStrict);
    assert!(route.warning.is_some());
}

#[test]
fn zero_target_and_goods() {
    let inst = instance(TopologyKind::Star, Aggregation::Add, false, 1);
    let q = FairnessQuery::exact(Criterion::Prop).with_threshold(int(0));
    assert_eq!(route_solver(&inst, &q).choice, SolverChoice::ZeroStar);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let goods = random_instance(
        &InstanceShape::new(TopologyKind::Complete, 3, 4)
            .aggregation(Aggregation::Max)
            .polarity(Polarity::Goods),
        &mut rng,
    )
    .unwrap();
    assert_eq!(
        route_solver(&goods, &FairnessQuery::exact(Criterion::Prop)).choice,
        SolverChoice::Oracle
    );
}

#[test]
fn routed_verdicts_agree_with_the_oracle() {
    let config = OracleConfig::default();
    for seed in 0..30 {
        for kind in [TopologyKind::Star, TopologyKind::Complete] {
            for criterion in CRITERIA {
                for agg in AGGREGATIONS {
                    let inst = instance(kind, agg, true, seed);
                    let q = FairnessQuery::exact(criterion);
                    let (_, verdict) = solve(&inst, &q, &config, false).unwrap();
                    let oracle = solve_exact(&inst, &q, &SearchBudget::unlimited()).unwrap();
                    match verdict {
                        Verdict::Feasible { allocation, .. } => {
                            assert!(oracle.is_feasible(), "{kind} {criterion} {agg} seed {seed}");
                            assert!(check_fairness(&inst, &allocation, &q).is_fair());
                        }
                        Verdict::Infeasible => assert!(
                            !oracle.is_feasible(),
                            "{kind} {criterion} {agg} seed {seed}"
                        ),
                        Verdict::Inconclusive(r) => panic!("unexpected {r:?}"),
                    }
                }
            }
        }
    }
}
