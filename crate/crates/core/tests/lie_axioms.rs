mod common;

use common::*;
use fhlie_core::lie::{heisenberg, StructureTable};
use fhlie_core::{Field, Nilpotency};
use proptest::prelude::*;
use std::sync::Arc;

fn base_tables() -> Vec<StructureTable> {
    instance_pool(20, 3)
        .into_iter()
        .filter(|(_, a)| a.field().degree() == 1 && a.dim() <= 12)
        .map(|(_, a)| a.ring().to_table())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Sparse edits may or may not leave a Lie bracket; the validator agrees
    /// with the dense oracle either way.
    #[test]
    fn validator_matches_dense_oracle(
        which in 0usize..1000,
        edits in prop::collection::vec((any::<usize>(), any::<usize>(), any::<usize>(), 1i64..100, any::<bool>()), 1..3),
    ) {
        let tables = base_tables();
        let mut t = tables[which % tables.len()].clone();
        let d = t.dim();
        let f = t.field().clone();
        for (i, j, k, c, symmetric) in edits {
            let (i, j, k) = (i % d, j % d, k % d);
            let c = f.add(t.get(i, j, k), f.from_i64(c));
            if symmetric && i != j {
                let mut row: Vec<_> = (0..d).map(|m| t.get(i, j, m)).collect();
                row[k] = c;
                t.set_bracket(i, j, &row);
            } else {
                t.set(i, j, k, c);
            }
        }
        prop_assert_eq!(t.validate().unwrap().is_empty(), dense_is_lie(&t));
    }
}

#[test]
fn generated_families_are_lie() {
    for (name, a) in instance_pool(60, 8) {
        assert!(a.ring().to_table().validate().unwrap().is_empty(), "{name}");
        if a.field().degree() == 1 {
            assert!(dense_is_lie(&a.ring().to_table()), "{name}");
        }
    }
}

#[test]
fn heisenberg_series() {
    let f = Arc::new(Field::prime(7).unwrap());
    let h = heisenberg(f);
    let series = h.lower_central_series();
    assert_eq!(series.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![3, 1, 0]);
    assert_eq!(h.nilpotency(), Nilpotency::Class(2));
    let sum = h.direct_sum(&h);
    assert_eq!(sum.dim(), 6);
    assert_eq!(sum.nilpotency(), Nilpotency::Class(2));
}

#[test]
fn non_nilpotent_ring_is_detected() {
    // [x, y] = y over F_5 is soluble but not nilpotent
    let f = Arc::new(Field::prime(5).unwrap());
    let mut t = StructureTable::new(f.clone(), 2);
    t.set_bracket(0, 1, &[f.zero(), f.one()]);
    let r = t.into_lie_ring().unwrap();
    assert_eq!(r.nilpotency(), Nilpotency::NotNilpotent);
}
