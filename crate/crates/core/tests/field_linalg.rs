use fhlie_core::field::{Elem, Field};
use fhlie_core::linalg::{self, Matrix, Subspace, Vector};
use proptest::prelude::*;

fn fields() -> Vec<Field> {
    vec![
        Field::prime(2).unwrap(),
        Field::prime(7).unwrap(),
        Field::prime(29).unwrap(),
        Field::new(2, 3, None).unwrap(),
        Field::new(3, 2, None).unwrap(),
        Field::new(5, 2, Some(vec![2, 0, 1])).unwrap(),
    ]
}

fn elem(f: &Field, code: u32) -> Elem {
    f.from_code(code % f.order()).unwrap()
}

fn vector(f: &Field, codes: &[u32]) -> Vector {
    codes.iter().map(|&c| elem(f, c)).collect()
}

proptest! {
    #[test]
    fn field_axioms(which in 0usize..6, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[which];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        prop_assert_eq!(f.mul_add(a, b, c), f.add(a, f.mul(b, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
            prop_assert_eq!(f.pow(a, -1), f.inv(a));
            prop_assert_eq!(f.pow(a, (f.order() - 1) as i64), f.one());
            prop_assert_eq!((f.order() as u64 - 1) % f.mult_order(a), 0);
        }
        prop_assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
    }

    #[test]
    fn frobenius_is_additive(which in 0usize..6, a in any::<u32>(), b in any::<u32>()) {
        let f = &fields()[which];
        let p = f.characteristic() as i64;
        let (a, b) = (elem(f, a), elem(f, b));
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn roots_of_unity(p in prop::sample::select(vec![5u32, 7, 11, 13]), n in 2u64..9) {
        prop_assume!(n % p as u64 != 0);
        let f = Field::with_root_of_unity(p, n).unwrap();
        prop_assert_eq!((f.order() as u64 - 1) % n, 0);
        let w = f.primitive_root_of_unity(n).unwrap();
        prop_assert_eq!(f.mult_order(w), n);
    }

    #[test]
    fn rank_nullity(which in 0usize..6, rows in 1usize..6, cols in 1usize..6, codes in prop::collection::vec(any::<u32>(), 36)) {
        let f = &fields()[which];
        let rs: Vec<Vector> = (0..rows).map(|r| vector(f, &codes[r * 6..r * 6 + cols])).collect();
        let m = Matrix::from_rows(cols, &rs);
        let rank = m.rank(f);
        prop_assert_eq!(m.right_kernel(f).dim() + rank, cols);
        prop_assert_eq!(m.left_kernel(f).dim() + rank, rows);
        prop_assert_eq!(m.transpose().rank(f), rank);
        for k in m.right_kernel(f).basis() {
            prop_assert!(linalg::is_zero(&m.transpose().apply(f, k)));
        }
    }

    #[test]
    fn inverse_round_trip(which in 0usize..6, n in 1usize..6, codes in prop::collection::vec(any::<u32>(), 25)) {
        let f = &fields()[which];
        let rs: Vec<Vector> = (0..n).map(|r| vector(f, &codes[r * 5..r * 5 + n])).collect();
        let m = Matrix::from_rows(n, &rs);
        match m.inverse(f) {
            Some(inv) => {
                prop_assert!(m.mul(f, &inv).is_identity());
                prop_assert!(inv.mul(f, &m).is_identity());
            }
            None => prop_assert!(m.rank(f) < n),
        }
    }

    #[test]
    fn subspace_dimension_formula(which in 0usize..6, a in 0usize..4, b in 0usize..4, codes in prop::collection::vec(any::<u32>(), 40)) {
        let f = &fields()[which];
        let d = 5;
        let va: Vec<Vector> = (0..a).map(|i| vector(f, &codes[i * d..i * d + d])).collect();
        let vb: Vec<Vector> = (0..b).map(|i| vector(f, &codes[20 + i * d..20 + i * d + d])).collect();
        let sa = Subspace::span(f, d, &va);
        let sb = Subspace::span(f, d, &vb);
        let sum = sa.sum(f, &sb);
        let meet = sa.intersect(f, &sb);
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        prop_assert!(meet.is_subspace_of(f, &sa) && meet.is_subspace_of(f, &sb));
        prop_assert!(sa.is_subspace_of(f, &sum));
        for v in &va {
            prop_assert!(sa.contains(f, v));
            prop_assert!(linalg::is_zero(&sa.reduce(f, v)));
            let c = sa.coords(f, v).unwrap();
            let mut back = linalg::zero_vec(d);
            for (x, b) in c.iter().zip(sa.basis()) {
                linalg::axpy(f, &mut back, *x, b);
            }
            prop_assert_eq!(&back, v);
        }
    }
}

#[test]
fn known_small_fields() {
    let f4 = Field::new(2, 2, None).unwrap();
    assert_eq!(f4.order(), 4);
    assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
    let f9 = Field::with_root_of_unity(3, 4).unwrap();
    assert_eq!(f9.order(), 9);
    assert!(Field::new(5, 2, Some(vec![1, 0, 1])).is_err(), "x^2 + 1 splits over F_5");
    assert!(Field::prime(9).is_err());
}
