use arithdyn::heights::{height_algebraic, weil_height, weil_height_affine, AlgebraicNumber};
use arithdyn::mapspec::parse_map;
use arithdyn::places::{abs_log, bad_places, product_formula_defect, LocalValue, Place};
use arithdyn::rational::{pow_q, Q};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational(max: i64) -> impl Strategy<Value = Q> {
    (-max..=max, 1..=max).prop_map(|(n, d)| Q::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero(max: i64) -> impl Strategy<Value = Q> {
    rational(max).prop_filter("nonzero", |x| *x != Q::from_integer(0.into()))
}

proptest! {
    #[test]
    fn product_formula_holds(n in any::<i64>().prop_filter("nonzero", |n| *n != 0), d in 1..=i64::MAX) {
        let x = Q::new(BigInt::from(n), BigInt::from(d));
        prop_assert!(product_formula_defect(&x).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn finite_logs_are_additive(x in nonzero(1 << 20), y in nonzero(1 << 20), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let v = Place::Finite(p);
        let (a, b, c) = (abs_log(&x, v).unwrap(), abs_log(&y, v).unwrap(), abs_log(&(&x * &y), v).unwrap());
        match (a.value, b.value, c.value) {
            (LocalValue::LogP(ea), LocalValue::LogP(eb), LocalValue::LogP(ec)) => prop_assert_eq!(ea + eb, ec),
            _ => prop_assert!(false, "finite places carry exact exponents"),
        }
    }

    #[test]
    fn rational_height_matches_degree_one_minpoly(x in rational(1 << 24)) {
        let w = weil_height(&x);
        let a = height_algebraic(&AlgebraicNumber::rational(&x)).unwrap();
        prop_assert_eq!(&w.finite, &a.finite);
        prop_assert!((w.archimedean - a.archimedean).abs() <= 1e-9);
    }

    #[test]
    fn powers_scale_heights(x in rational(1000), n in 1i64..=10) {
        let h = weil_height(&x).total();
        let hn = weil_height(&pow_q(&x, n)).total();
        prop_assert!((hn - n as f64 * h).abs() <= 1e-9 * (1.0 + hn));
    }

    #[test]
    fn affine_height_is_symmetric(x in rational(1000), y in rational(1000), z in rational(1000)) {
        let a = weil_height_affine(&[x.clone(), y.clone(), z.clone()]);
        let b = weil_height_affine(&[z, x, y]);
        prop_assert_eq!(&a.finite, &b.finite);
        prop_assert!((a.total() - b.total()).abs() <= 1e-12);
        prop_assert!(a.total() >= -a.error_bound());
    }

    #[test]
    fn unit_scaling_keeps_bad_places(u in prop::sample::select(vec![1i64, -1, 3, 5, -7])) {
        // u is a unit at 2, so membership of 2 cannot change.
        let f = parse_map("f", "p1: x^2 - 1/2").unwrap();
        let g = parse_map("f", &format!("p1: {u} x^2 - {u}/2")).unwrap();
        prop_assert_eq!(bad_places(&f).contains(&Place::Finite(2)), bad_places(&g).contains(&Place::Finite(2)));
    }
}
