mod common;

use common::*;
use fhlie_core::bridge::{AssociatedLieRing, GroupBridge, InductionParameter};
use fhlie_core::group::{
    conjugation, cyclic, dihedral, elementary_abelian_action, symmetric, unitriangular, unitriangular_action,
    FiniteGroup, GroupAction, GroupViolation,
};
use fhlie_core::Exec;
use num_bigint::BigUint;
use proptest::prelude::*;

fn ut7() -> GroupAction {
    unitriangular_action(7, shape(3, 2, 2)).unwrap()
}

#[test]
fn unitriangular_fixed_points_and_classes() {
    let a = ut7();
    let g = &a.group;
    assert_eq!(g.order(), 343);
    assert_eq!(g.class(), Some(2));
    assert_eq!(a.fixed_phi(&g.whole()).order(), 7);
    let lie = AssociatedLieRing::of_group(&a, Exec::default()).unwrap();
    assert_eq!(lie.factor_dims(), &[2, 1]);
    assert!(lie.well_defined());
    assert_eq!(lie.fixed_phi_order(), BigUint::from(7u32));
    assert_eq!(lie.ring().nilpotency().class(), Some(2));
    let gh = g.class_of(&a.fixed_h(&g.whole())).unwrap();
    let lh = lie.ring().nilpotency_of(&lie.fixed_h_space().unwrap()).class().unwrap();
    assert!(lh <= gh);
    assert!(lie.action().unwrap().validate().is_empty());
}

#[test]
fn k_subgroups_and_a_tower() {
    let a = ut7();
    let b = GroupBridge::new(&a, 2, Exec::default()).unwrap();
    for x in a.group.generators() {
        let r = b.k_report(&[x], Exec::default()).unwrap();
        assert!(r.all_pass());
        assert!(BigUint::from(r.index) <= r.bound);
    }
    let tower = b.a_tower(Default::default(), Exec::default()).unwrap();
    let checks = b.tower_checks(&tower, Exec::default()).unwrap();
    assert!(checks.all_pass());
    assert_eq!(checks.orders, vec![343, 7]);
    assert_eq!(checks.parameters[0].m, 7);
    assert_eq!(checks.parameters[0].m_bar, vec![1, 7]);
    assert!(checks.parameters.windows(2).all(|w| w[1] < w[0]));
    assert!(b.covering_holds());
}

#[test]
fn fitting_of_small_groups() {
    let s3 = symmetric(3).unwrap();
    let f = s3.fitting(Exec::default());
    assert_eq!((f.order, f.index), (3, 2));
    assert!(f.verified());
    let s4 = symmetric(4).unwrap();
    assert_eq!(s4.fitting(Exec::default()).order, 4);
    assert_eq!(dihedral(6).unwrap().fitting(Exec::default()).order, 6);
}

#[test]
fn invalid_actions_are_reported() {
    let g = symmetric(3).unwrap();
    let a = GroupAction::from_parts(g.clone(), shape(3, 2, 2), conjugation(&g, 3), conjugation(&g, 2)).unwrap();
    let v = a.validate();
    assert!(v.iter().any(|x| matches!(x, GroupViolation::NotCoprime { .. })));
    let c = cyclic(5).unwrap();
    let not_hom: Vec<usize> = (0..5).map(|x| (x * x) % 5).collect();
    let bad = GroupAction::from_parts(c.clone(), shape(3, 2, 2), not_hom, (0..5).collect()).unwrap();
    assert!(!bad.validate().is_empty());
}

#[test]
fn elementary_abelian_bridge_is_abelian() {
    let a = elementary_abelian_action(7, shape(3, 2, 2)).unwrap();
    let lie = AssociatedLieRing::of_group(&a, Exec::default()).unwrap();
    assert!(lie.ring().is_abelian());
    assert_eq!(lie.fixed_phi_order(), BigUint::from(1u32));
}

fn small_nilpotent(choice: usize, k: usize) -> FiniteGroup {
    match choice % 4 {
        0 => cyclic(2 + k % 30).unwrap(),
        1 => dihedral(1 << (1 + k % 3)).unwrap(),
        2 => unitriangular([3, 5][k % 2]).unwrap(),
        _ => dihedral(4).unwrap().direct_product(&cyclic(1 + 2 * (k % 4)).unwrap()).unwrap(),
    }
}

fn parameter() -> impl Strategy<Value = InductionParameter> {
    (1u64..5, prop::collection::vec(1u64..5, 2), 0u64..5).prop_map(|(m, m_bar, t)| InductionParameter { m, m_bar, t })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nilpotent_groups_are_their_own_fitting_subgroup(choice in 0usize..4, k in 0usize..40) {
        let g = small_nilpotent(choice, k);
        prop_assert!(g.class().is_some());
        let f = g.fitting(Exec::default());
        prop_assert_eq!(f.index, 1);
        prop_assert!(f.verified());
    }

    #[test]
    fn parameter_order_is_total_and_m_first(a in parameter(), b in parameter(), c in parameter()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        if a.m < b.m {
            prop_assert!(a < b);
        }
        if a.m == b.m && a.m_bar == b.m_bar {
            prop_assert_eq!(a.cmp(&b), a.t.cmp(&b.t));
        }
        if a.m == b.m {
            if let Some(i) = (0..2).find(|&i| a.m_bar[i] != b.m_bar[i]) {
                // larger fixed-point count at the first difference is smaller
                prop_assert_eq!(a < b, a.m_bar[i] > b.m_bar[i]);
            }
        }
    }
}
