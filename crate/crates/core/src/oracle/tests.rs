use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::allocation::validate_allocation;
use crate::fairness::Criterion;
use crate::instance::{Aggregation, Polarity};
use crate::rational::{int, ratio};

fn instance(
    rows: &[&[i64]],
    edges: &[(usize, usize)],
    agg: Aggregation,
    pol: Polarity,
) -> Instance {
    Instance::new(
        rows.len(),
        rows[0].len(),
        edges.to_vec(),
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect(),
        agg,
        pol,
    )
    .unwrap()
}

const PATH4: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3)];

/// Every owner map, filtered by validity. Independent of the engine.
fn brute_force(inst: &Instance) -> BTreeSet<Allocation> {
    let (n, m) = (inst.agents(), inst.items());
    let mut owners = vec![0usize; m];
    let mut out = BTreeSet::new();
    loop {
        let alloc = Allocation::from_owners(n, &owners);
        if validate_allocation(inst, &alloc).is_valid() {
            out.insert(alloc);
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            owners[k] += 1;
            if owners[k] < n {
                break;
            }
            owners[k] = 0;
            k += 1;
        }
    }
}

fn collect(inst: &Instance, budget: &SearchBudget) -> Vec<Allocation> {
    let mut seen = Vec::new();
    let outcome = enumerate_valid_allocations(inst, budget, |a| {
        seen.push(a.clone());
        ControlFlow::Continue(())
    })
    .unwrap();
    assert!(matches!(outcome, Enumeration::Exhausted(_)));
    seen
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, agg: Aggregation) -> Instance {
    let mut edges = Vec::new();
    for v in 1..m {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..m {
        for b in a + 1..m {
            if rng.gen_bool(0.2) && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    let table = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| ratio(rng.gen_range(0..4), rng.gen_range(1..3)))
                .collect()
        })
        .collect();
    Instance::new(n, m, edges, table, agg, Polarity::Chores).unwrap()
}

#[test]
fn two_item_path_two_agents_has_four_allocations() {
    let inst = instance(
        &[&[1, 1], &[1, 1]],
        &[(0, 1)],
        Aggregation::Add,
        Polarity::Chores,
    );
    let seen = collect(&inst, &SearchBudget::unlimited());
    assert_eq!(seen.len(), 4);
    assert_eq!(
        seen.iter().cloned().collect::<BTreeSet<_>>(),
        brute_force(&inst)
    );
}

#[test]
fn single_agent_has_one_allocation() {
    let inst = instance(
        &[&[1, 2, 3, 4]],
        &[(0, 1), (0, 2), (0, 3), (1, 2)],
        Aggregation::Add,
        Polarity::Chores,
    );
    assert_eq!(collect(&inst, &SearchBudget::unlimited()).len(), 1);
}

#[test]
fn enumeration_matches_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=6);
        let inst = random_instance(&mut rng, n, m, Aggregation::Add);
        let seen = collect(&inst, &SearchBudget::unlimited());
        let set: BTreeSet<_> = seen.iter().cloned().collect();
        assert_eq!(set.len(), seen.len(), "duplicate visit");
        assert_eq!(set, brute_force(&inst));
    }
}

#[test]
fn zero_only_visits_exactly_the_zero_allocations() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=6);
        let agg = if rng.gen_bool(0.5) {
            Aggregation::Add
        } else {
            Aggregation::Max
        };
        let inst = random_instance(&mut rng, n, m, agg);
        let zero: BTreeSet<_> = collect(&inst, &SearchBudget::unlimited().with_zero_only(true))
            .into_iter()
            .collect();
        let expected: BTreeSet<_> = brute_force(&inst)
            .into_iter()
            .filter(|a| {
                (0..n).all(|i| inst.aggregate(i, a.bundle(i).iter().copied()).unwrap() == int(0))
            })
            .collect();
        assert_eq!(zero, expected);
    }
}

#[test]
fn solve_exact_agrees_with_filtering() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for round in 0..150 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=6);
        let agg = if round % 2 == 0 {
            Aggregation::Add
        } else {
            Aggregation::Max
        };
        let mut inst = random_instance(&mut rng, n, m, agg);
        if round % 3 == 0 {
            inst = inst.with_polarity(Polarity::Goods);
        }
        let all = brute_force(&inst);
        for criterion in [Criterion::Prop, Criterion::Ef, Criterion::Eq] {
            let factor = if rng.gen_bool(0.3) {
                ratio(3, 2)
            } else {
                int(1)
            };
            let query = FairnessQuery::new(criterion, factor).unwrap();
            let expected = all
                .iter()
                .any(|a| check_fairness(&inst, a, &query).is_fair());
            let got = solve_exact(&inst, &query, &SearchBudget::unlimited()).unwrap();
            assert_eq!(got.is_feasible(), expected, "{criterion} on {inst:?}");
            if let ExactOutcome::Feasible(w) = got {
                assert!(check_fairness(&inst, &w, &query).is_fair());
            }
        }
    }
}

#[test]
fn nobody_takes_the_heavy_chore_so_no_proportional_allocation() {
    let inst = instance(
        &[&[6, 4, 0, 0], &[7, 0, 1, 2], &[5, 0, 0, 5]],
        PATH4,
        Aggregation::Add,
        Polarity::Chores,
    );
    let q = FairnessQuery::exact(Criterion::Prop);
    assert_eq!(
        solve_exact(&inst, &q, &SearchBudget::default()).unwrap(),
        ExactOutcome::Infeasible
    );
}

#[test]
fn goods_dual_has_no_envy_free_allocation() {
    let inst = instance(
        &[&[4, 6, 10, 10], &[3, 10, 9, 8], &[10, 5, 5, 10]],
        PATH4,
        Aggregation::Add,
        Polarity::Goods,
    );
    let q = FairnessQuery::exact(Criterion::Ef);
    assert_eq!(
        solve_exact(&inst, &q, &SearchBudget::default()).unwrap(),
        ExactOutcome::Infeasible
    );
}

#[test]
fn chores_admit_envy_free_allocation() {
    let inst = instance(
        &[&[6, 4, 0, 0], &[7, 0, 1, 2], &[0, 5, 5, 0]],
        PATH4,
        Aggregation::Add,
        Polarity::Chores,
    );
    let q = FairnessQuery::exact(Criterion::Ef);
    let ExactOutcome::Feasible(w) = solve_exact(&inst, &q, &SearchBudget::default()).unwrap()
    else {
        panic!("expected a witness");
    };
    assert!(check_fairness(&inst, &w, &q).is_fair());
}

#[test]
fn min_max_on_complete_graph() {
    let k4 = &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let inst = instance(
        &[&[6, 4, 0, 0], &[7, 0, 1, 2], &[5, 0, 0, 5]],
        k4,
        Aggregation::Max,
        Polarity::Chores,
    );
    let MinMaxOutcome::Optimal { value, allocation } =
        min_max_disutility(&inst, &SearchBudget::default()).unwrap()
    else {
        panic!("expected optimum");
    };
    assert_eq!(value, int(5));
    assert!(validate_allocation(&inst, &allocation).is_valid());

    let zero = instance(
        &[&[0, 0, 0], &[0, 0, 0]],
        &[(0, 1), (1, 2)],
        Aggregation::Add,
        Polarity::Chores,
    );
    assert!(matches!(
        min_max_disutility(&zero, &SearchBudget::default()).unwrap(),
        MinMaxOutcome::Optimal { value, .. } if value == int(0)
    ));

    let single = instance(
        &[&[1, 2, 3]],
        &[(0, 1), (1, 2)],
        Aggregation::Add,
        Polarity::Chores,
    );
    assert!(matches!(
        min_max_disutility(&single, &SearchBudget::default()).unwrap(),
        MinMaxOutcome::Optimal { value, .. } if value == int(6)
    ));
}

#[test]
fn node_limit_is_reported_not_swallowed() {
    let inst = instance(
        &[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]],
        PATH4,
        Aggregation::Add,
        Polarity::Chores,
    );
    let budget = SearchBudget::default().with_max_nodes(3);
    let outcome =
        enumerate_valid_allocations(&inst, &budget, |_| ControlFlow::Continue(())).unwrap();
    assert!(matches!(
        outcome,
        Enumeration::Inconclusive(_, StopReason::NodeLimit)
    ));
    let q = FairnessQuery::exact(Criterion::Eq).with_threshold(int(0));
    let eq = solve_exact(
        &inst
            .with_edges(vec![(0, 1), (1, 2), (2, 3), (3, 0)])
            .unwrap(),
        &q,
        &budget,
    )
    .unwrap();
    assert_eq!(eq, ExactOutcome::Inconclusive(StopReason::NodeLimit));
}

#[test]
fn deadline_stops_the_search() {
    let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(3), 4, 10, Aggregation::Add);
    let outcome = Search::new(&inst)
        .budget(SearchBudget::unlimited())
        .deadline(&|| true)
        .enumerate(|_| ControlFlow::Continue(()))
        .unwrap();
    assert!(matches!(
        outcome,
        Enumeration::Inconclusive(_, StopReason::TimeLimit)
    ));
}

#[test]
fn branches_partition_the_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let inst = random_instance(&mut rng, 3, 5, Aggregation::Add);
        let total = collect(&inst, &SearchBudget::unlimited()).len();
        let mut sum = 0;
        for b in 0..3 {
            Search::new(&inst)
                .budget(SearchBudget::unlimited())
                .branch(b)
                .enumerate(|_| {
                    sum += 1;
                    ControlFlow::Continue(())
                })
                .unwrap();
        }
        assert_eq!(sum, total);
    }
    let inst = random_instance(&mut rng, 2, 3, Aggregation::Add);
    assert!(matches!(
        Search::new(&inst).branch(2).min_max(),
        Err(OracleError::NoSuchBranch { .. })
    ));
}

#[test]
fn rejects_bad_budgets_and_huge_values() {
    let inst = instance(&[&[1, 1]], &[(0, 1)], Aggregation::Add, Polarity::Chores);
    assert_eq!(
        min_max_disutility(&inst, &SearchBudget::default().with_max_nodes(0)),
        Err(OracleError::InvalidBudget)
    );
    let huge = Instance::new(
        1,
        2,
        vec![(0, 1)],
        vec![vec![int(i64::MAX), int(i64::MAX)]],
        Aggregation::Add,
        Polarity::Chores,
    )
    .unwrap();
    assert_eq!(
        min_max_disutility(&huge, &SearchBudget::default()),
        Err(OracleError::ValuesTooLarge)
    );
}
