use std::collections::BTreeSet;

use arithdyn::henon::{canonical_heights_henon, green_henon, is_periodic_henon, HenonMap};
use arithdyn::mapspec::parse_map;
use arithdyn::places::{support_primes, Place};
use arithdyn::rational::{rational_box, Q};
use arithdyn::system::DynamicalSystem;
use num_bigint::BigInt;
use proptest::prelude::*;

const CORPUS: [&str; 3] = ["henon: P = y^2, delta = 1", "henon: P = y^2 - 1, delta = 1/2", "henon: P = y^2, delta = 1; P = y^3 + y, delta = 2"];

fn map(s: &str) -> HenonMap {
    match parse_map("map", s).unwrap() {
        DynamicalSystem::Henon(h) => h,
        _ => unreachable!(),
    }
}

fn point() -> impl Strategy<Value = [Q; 2]> {
    ((-30i64..=30, 1i64..=8), (-30i64..=30, 1i64..=8))
        .prop_map(|((a, b), (c, d))| [Q::new(BigInt::from(a), BigInt::from(b)), Q::new(BigInt::from(c), BigInt::from(d))])
}

fn places(h: &HenonMap, pts: &[&[Q; 2]]) -> Vec<Place> {
    let mut primes: BTreeSet<u64> = h.bad_primes().into_iter().collect();
    for p in pts {
        for c in p.iter() {
            primes.extend(support_primes(c));
        }
    }
    std::iter::once(Place::Archimedean).chain(primes.into_iter().map(Place::Finite)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn backward_invariance(i in 0usize..3, p in point()) {
        let h = map(CORPUS[i]);
        let d = h.degree() as f64;
        let tol = 1e-8;
        let q = h.eval_inverse(&p);
        for v in places(&h, &[&p, &q]) {
            let a = green_henon(&h, &q, v, tol).unwrap().g_minus.to_f64();
            let b = green_henon(&h, &p, v, tol / d).unwrap().g_minus.to_f64();
            prop_assert!((a - d * b).abs() <= 2.0 * tol, "{} at {:?}, {}: {} vs {}", CORPUS[i], p, v, a, d * b);
        }
    }

    #[test]
    fn global_heights_scale(i in 0usize..3, p in point()) {
        let h = map(CORPUS[i]);
        let d = h.degree() as f64;
        let tol = 1e-8;
        let q = h.eval(&p);
        let (mut plus, mut minus, mut slack) = (0.0, 0.0, 0.0);
        for v in places(&h, &[&p, &q]) {
            let a = green_henon(&h, &q, v, tol).unwrap();
            let b = green_henon(&h, &p, v, tol / d).unwrap();
            plus += a.g_plus.to_f64() - d * b.g_plus.to_f64();
            minus += d * a.g_minus.to_f64() - b.g_minus.to_f64();
            slack += 2.0 * tol * d;
        }
        prop_assert!(plus.abs() <= slack, "{} at {:?}: G+ off by {}", CORPUS[i], p, plus);
        prop_assert!(minus.abs() <= slack, "{} at {:?}: G- off by {}", CORPUS[i], p, minus);
    }

    #[test]
    fn good_places_vanish_on_integral_points(a in -50i64..=50, b in -50i64..=50, p in prop::sample::select(vec![3u64, 5, 7])) {
        let h = map(CORPUS[0]);
        let pt = [Q::from_integer(a.into()), Q::from_integer(b.into())];
        let g = green_henon(&h, &pt, Place::Finite(p), 1e-8).unwrap();
        prop_assert!(g.g_plus.is_exact_zero() && g.g_minus.is_exact_zero());
    }
}

fn check_periodic_agrees(h: &HenonMap, p: &[Q; 2]) -> bool {
    let per = is_periodic_henon(h, p).unwrap().periodic;
    let zero = canonical_heights_henon(h, p, 1e-6).unwrap().htilde.is_exact_zero();
    assert_eq!(per, zero, "{p:?}");
    per
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn periodic_iff_exact_zero_on_box_samples(i in 0usize..BOX_LEN, j in 0usize..BOX_LEN) {
        let b = rational_box(20, 20);
        check_periodic_agrees(&map(CORPUS[0]), &[b[i].clone(), b[j].clone()]);
    }
}

const BOX_LEN: usize = 511;

#[test]
fn periodic_iff_exact_zero_on_integer_grid() {
    let h = map(CORPUS[0]);
    assert_eq!(rational_box(20, 20).len(), BOX_LEN);
    let mut periodic = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            periodic += usize::from(check_periodic_agrees(&h, &[Q::from_integer(a.into()), Q::from_integer(b.into())]));
        }
    }
    assert!(periodic >= 2);
}
