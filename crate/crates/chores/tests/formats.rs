use chores::dimacs::{emit_dimacs, parse_dimacs};
use chores::format::{emit_allocation, emit_instance, parse_allocation, parse_instance};
use chores_core::generate::{random_instance, random_valid_allocation, InstanceShape};
use chores_core::instance::{Aggregation, Polarity};
use chores_core::reductions::random_22e3sat;
use chores_core::topology::TopologyKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_instances_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let kinds = [
        TopologyKind::Path,
        TopologyKind::Star,
        TopologyKind::Complete,
        TopologyKind::Tree,
        TopologyKind::General,
    ];
    for i in 0..200 {
        let shape = InstanceShape::new(
            kinds[i % kinds.len()],
            rng.gen_range(1..=5),
            rng.gen_range(1..=8),
        )
        .aggregation(if rng.gen() {
            Aggregation::Add
        } else {
            Aggregation::Max
        })
        .polarity(if rng.gen() {
            Polarity::Chores
        } else {
            Polarity::Goods
        })
        .normalize(rng.gen());
        let inst = random_instance(&shape, &mut rng).unwrap();
        let text = emit_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(emit_instance(&back), text);

        if let Some(alloc) = random_valid_allocation(&inst, &mut rng) {
            let text = emit_allocation(&alloc);
            assert_eq!(parse_allocation(&text).unwrap(), alloc);
        }
    }
}

#[test]
fn random_formulas_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for vars in [3, 6, 9, 12] {
        let f = random_22e3sat(vars, true, &mut rng).unwrap();
        assert_eq!(parse_dimacs(&emit_dimacs(&f)).unwrap(), f);
    }
}
