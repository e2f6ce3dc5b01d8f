use proptest::prelude::*;

use pretzel_core::laurent::LaurentPoly;
use pretzel_core::qcalc::{tet, theta_of, TetColors};
use pretzel_core::RationalFn;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-12i64..12, -20i64..20), 0..6).prop_map(LaurentPoly::from_terms)
}

fn same(x: &RationalFn, y: &RationalFn) -> bool {
    x.sub(y).unwrap().num.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        // most random edge sextuples are not admissible
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    })]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_product(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn theta_is_symmetric(a in 0i64..8, b in 0i64..8, c in 0i64..8) {
        if let Ok(t) = theta_of(a, b, c) {
            prop_assert_eq!(theta_of(b, a, c).unwrap(), t.clone());
            prop_assert_eq!(theta_of(c, b, a).unwrap(), t);
        } else {
            prop_assert!(theta_of(b, c, a).is_err());
        }
    }

    #[test]
    fn tet_has_tetrahedral_symmetry(
        e in prop::array::uniform6(0u32..5),
        perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let t = TetColors::new(e[0], e[1], e[2], e[3], e[4], e[5]);
        prop_assume!(t.check().is_ok());
        let p: [usize; 4] = perm;
        prop_assert!(same(&tet(&t).unwrap(), &tet(&t.permuted(p)).unwrap()));
    }

    #[test]
    fn tet_with_zero_edge_is_theta(a in 0u32..6, b in 0u32..6, c in 0u32..6) {
        let th = theta_of(a as i64, b as i64, c as i64);
        prop_assume!(th.is_ok());
        let z = tet(&TetColors::new(a, b, c, b, c, 0)).unwrap();
        let want = RationalFn::from_scalar(&th.unwrap(), &LaurentPoly::one()).unwrap();
        prop_assert!(same(&z, &want));
    }
}
