mod common;

use common::*;
use fhlie_core::frobenius::{check_grading_laws, check_projection_laws, FixedBy};
use fhlie_core::instance::{generate, scramble, Family, LieInstanceFile};
use fhlie_core::{linalg, Exec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn families() -> Vec<Family> {
    let s = shape(3, 2, 2);
    vec![
        Family::heisenberg_sum(s, 2, 3),
        Family::heisenberg_sum(shape(5, 2, 4), 2, 4),
        free_nilpotent(s, 1, 3, None, false, None),
        free_nilpotent(s, 2, 3, Some(1), false, None),
        free_nilpotent(s, 1, 3, None, false, Some(5)),
        free_nilpotent(shape(7, 3, 2), 1, 3, Some(2), false, None),
        Family::padded_sum(s, 1, 3, 3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scrambled_instances_keep_their_grading(which in 0usize..7, seed in any::<u64>()) {
        let g = generate(&families()[which], Exec::Sequential).unwrap();
        let base_dims = g.action.eigen_decompose().dims();
        let s = scramble(&g, seed);
        let a = &s.action;
        prop_assert!(a.validate().is_empty());
        prop_assert!(a.ring().to_table().validate().unwrap().is_empty());
        let d = a.eigen_decompose();
        prop_assert_eq!(d.dims(), base_dims);
        prop_assert!(check_projection_laws(&d, a).is_empty());
        prop_assert!(check_grading_laws(&d, a).is_empty());
        let f = a.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_vector(f, a.dim(), &mut rng);
        let parts = d.split(&x);
        let mut sum = linalg::zero_vec(a.dim());
        for h in &parts {
            prop_assert_eq!(&h.vector, &phi_term(a, &x, h.index));
            prop_assert_eq!(d.tag(&h.vector, h.index).map(|t| t.index), Some(h.index));
            sum = linalg::add(f, &sum, &h.vector);
        }
        prop_assert_eq!(sum, x);
        prop_assert_eq!(a.fixed_subring(FixedBy::F).space.dim(), d.component(0).dim());
    }

    #[test]
    fn instance_files_round_trip(which in 0usize..7, seed in any::<u64>()) {
        let g = scramble(&generate(&families()[which], Exec::Sequential).unwrap(), seed);
        let text = g.to_file(None).to_json();
        let parsed = LieInstanceFile::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_json(), text);
        let back = parsed.to_action().unwrap();
        prop_assert_eq!(back.phi(), g.action.phi());
        prop_assert_eq!(back.h(), g.action.h());
        prop_assert_eq!(back.ring().to_table().entries().collect::<Vec<_>>(), g.action.ring().to_table().entries().collect::<Vec<_>>());
    }
}

#[test]
fn heisenberg_components_and_fixed_points() {
    let a = fhlie_core::frobenius::heisenberg_example();
    let d = a.eigen_decompose();
    assert_eq!(d.dims(), vec![1, 1, 1]);
    assert_eq!(a.fixed_subring(FixedBy::F).space.dim(), 1);
    let ch = a.fixed_subring(FixedBy::H);
    assert_eq!(ch.space.dim(), 1);
    assert_eq!(ch.nilpotency.class(), Some(1));
    assert_eq!(a.fixed_subring(FixedBy::FH).space.dim(), 0);
}
