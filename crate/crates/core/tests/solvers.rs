use chores_core::complete::{solve_max_eq_complete, solve_max_prop_complete};
use chores_core::fairness::{check_fairness, Criterion, FairnessQuery};
use chores_core::generate::{random_instance, random_valid_allocation, InstanceShape};
use chores_core::instance::{Aggregation, Instance, Polarity};
use chores_core::oracle::{solve_exact, SearchBudget};
use chores_core::rational::{int, ratio, Rational};
use chores_core::star::{
    solve_add_prop_star, solve_max_eq_star, solve_max_prop_star, solve_zero_star,
};
use chores_core::topology::TopologyKind;
use chores_core::{Decision, SolverError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(kind: TopologyKind, agg: Aggregation, n: usize, m: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(&InstanceShape::new(kind, n, m).aggregation(agg), &mut rng).unwrap()
}

fn query(criterion: Criterion, factor: (i64, i64), threshold: Option<(i64, i64)>) -> FairnessQuery {
    let q = FairnessQuery::new(criterion, ratio(factor.0, factor.1)).unwrap();
    match threshold {
        Some((a, b)) => q.with_threshold(ratio(a, b)),
        None => q,
    }
}

fn agree(
    inst: &Instance,
    q: &FairnessQuery,
    fast: Decision<chores_core::allocation::Allocation>,
) -> Result<(), TestCaseError> {
    let exact = solve_exact(inst, q, &SearchBudget::unlimited()).unwrap();
    prop_assert_eq!(fast.is_feasible(), exact.is_feasible());
    if let Decision::Feasible(a) = fast {
        prop_assert!(check_fairness(inst, &a, q).is_fair());
    }
    Ok(())
}

fn factors() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![Just((1, 1)), Just((3, 2)), Just((2, 1)), Just((3, 1))]
}

fn thresholds() -> impl Strategy<Value = Option<(i64, i64)>> {
    prop_oneof![Just(None), (0i64..4, 1i64..4).prop_map(Some)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn max_prop_complete(seed: u64, n in 1usize..=4, m in 1usize..=6, f in factors(), t in thresholds()) {
        let inst = instance(TopologyKind::Complete, Aggregation::Max, n, m, seed);
        let q = query(Criterion::Prop, f, t);
        agree(&inst, &q, solve_max_prop_complete(&inst, &q).unwrap())?;
    }

    #[test]
    fn prop_star(seed: u64, n in 1usize..=4, m in 3usize..=7, f in factors(), t in thresholds(), max: bool) {
        let agg = if max { Aggregation::Max } else { Aggregation::Add };
        let inst = instance(TopologyKind::Star, agg, n, m, seed);
        let q = query(Criterion::Prop, f, t);
        let fast = if max { solve_max_prop_star(&inst, &q) } else { solve_add_prop_star(&inst, &q) };
        agree(&inst, &q, fast.unwrap())?;
    }

    #[test]
    fn equitable_witnesses_report_their_value(seed: u64, n in 1usize..=4, m in 3usize..=6, star: bool) {
        let kind = if star { TopologyKind::Star } else { TopologyKind::Complete };
        let inst = instance(kind, Aggregation::Max, n, m, seed);
        let d = if star { solve_max_eq_star(&inst) } else { solve_max_eq_complete(&inst) };
        if let Decision::Feasible(w) = d.unwrap() {
            for a in 0..n {
                prop_assert_eq!(inst.aggregate(a, w.allocation.bundle(a).iter().copied()).unwrap(), w.eta.clone());
            }
        }
    }

    #[test]
    fn larger_factors_only_relax(seed: u64, n in 1usize..=4, m in 1usize..=6, goods: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pol = if goods { Polarity::Goods } else { Polarity::Chores };
        let inst = random_instance(&InstanceShape::new(TopologyKind::General, n, m).polarity(pol), &mut rng).unwrap();
        let alloc = random_valid_allocation(&inst, &mut rng).unwrap();
        for c in [Criterion::Prop, Criterion::Ef, Criterion::Eq] {
            let mut was_fair = false;
            for f in [int(1), ratio(5, 4), int(2), int(5)] {
                let fair = check_fairness(&inst, &alloc, &FairnessQuery::new(c, f).unwrap()).is_fair();
                prop_assert!(fair || !was_fair, "{} lost fairness at a larger factor", c);
                was_fair = fair;
            }
        }
    }
}

#[test]
fn solvers_check_their_preconditions() {
    let path = instance(TopologyKind::Path, Aggregation::Max, 2, 5, 1);
    let star_add = instance(TopologyKind::Star, Aggregation::Add, 2, 5, 1);
    let prop = FairnessQuery::exact(Criterion::Prop);
    assert!(matches!(
        solve_max_prop_complete(&path, &prop),
        Err(SolverError::WrongTopology { .. })
    ));
    assert!(solve_max_eq_star(&star_add).is_err());
    assert!(solve_add_prop_star(&star_add, &FairnessQuery::exact(Criterion::Ef)).is_err());
    let goods = star_add.with_polarity(Polarity::Goods);
    assert!(solve_zero_star(&goods).is_err());
}

#[test]
fn factor_below_one_is_rejected() {
    assert!(FairnessQuery::new(Criterion::Ef, Rational::new(1.into(), 2.into())).is_err());
}
