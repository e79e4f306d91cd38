use arithdyn::freeness::{find_relation, verify_relation};
use arithdyn::p1dyn::RationalMapP1;
use arithdyn::poly::QPoly;
use arithdyn::system::DynamicalSystem;
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = DynamicalSystem> {
    (1i64..=3, -4i64..=4, -4i64..=4)
        .prop_map(|(a, b, c)| DynamicalSystem::P1(RationalMapP1::polynomial(QPoly::from_ints(&[c, b, a])).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn square_is_always_found(f in quad()) {
        let ff = f.compose(&f).unwrap();
        let c = find_relation(&f, &ff, 2, 5).unwrap();
        prop_assert!(c.is_some());
        let c = c.unwrap();
        prop_assert!(verify_relation(&c, &f, &ff).unwrap());
        prop_assert_eq!(Some(c), find_relation(&f, &ff, 2, 5).unwrap());
    }

    #[test]
    fn sampling_only_prunes(f in quad(), g in quad()) {
        // Whatever the sample count, a confirmed relation is the same one.
        let a = find_relation(&f, &g, 3, 1).unwrap();
        let b = find_relation(&f, &g, 3, 8).unwrap();
        prop_assert_eq!(a.as_ref().map(|c| (c.w1.clone(), c.w2.clone())), b.as_ref().map(|c| (c.w1.clone(), c.w2.clone())));
        if let Some(c) = a {
            prop_assert!(verify_relation(&c, &f, &g).unwrap());
        }
    }
}
