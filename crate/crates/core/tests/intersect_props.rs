use arithdyn::intersect::{density_report, solve_common, solve_equalizer};
use arithdyn::mapspec::parse_map;
use arithdyn::p1dyn::RationalMapP1;
use arithdyn::poly::QPoly;
use arithdyn::system::DynamicalSystem;
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = DynamicalSystem> {
    (-3i64..=3, -3i64..=3).prop_map(|(b, c)| DynamicalSystem::P1(RationalMapP1::polynomial(QPoly::from_ints(&[c, b, 1])).unwrap()))
}

fn skew() -> impl Strategy<Value = DynamicalSystem> {
    (-2i64..=2, -2i64..=2, -1i64..=1).prop_map(|(a, b, c)| parse_map("F", &format!("skew: p = x^2 + {a}; q = y^2 + {b} + {c} x")).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn common_zeros_lie_in_each_equalizer(f in quad(), g in quad(), m in 1usize..=3, n in 1usize..=3) {
        let id = parse_map("C", "p1: x").unwrap();
        let both = solve_common(&f, &g, &id, m, n).unwrap();
        let a = solve_equalizer(&f, m, &id).unwrap();
        let b = solve_equalizer(&g, n, &id).unwrap();
        prop_assert!(both.all_verified() && a.all_verified() && b.all_verified());
        prop_assert!(a.elimination.rem(&both.elimination).is_zero());
        prop_assert!(b.elimination.rem(&both.elimination).is_zero());
    }

    #[test]
    fn plane_solutions_verify(f in skew(), m in 1usize..=2) {
        let id = parse_map("C", "poly2: x; y").unwrap();
        let s = solve_equalizer(&f, m, &id).unwrap();
        prop_assert!(s.all_verified());
        prop_assert_eq!(s.count(), 1usize << (2 * m));
    }

    #[test]
    fn reported_curves_verify(f in skew(), g in skew()) {
        let id = parse_map("C", "poly2: x; y").unwrap();
        let r = density_report(&f, &g, &id, &[1], &[1], 2).unwrap();
        if let Some(c) = r.curve {
            prop_assert!(c.verified);
        }
    }
}

#[test]
fn budgets_are_enforced() {
    use arithdyn::intersect::{solve_equalizer_with, Budget};
    use arithdyn::Error;
    let f = parse_map("F", "skew: p = x^2 - 1000/7; q = y^2 + x/3").unwrap();
    let id = parse_map("C", "poly2: x; y").unwrap();
    let tight = Budget { bits: 8, ..Budget::default() };
    assert!(matches!(solve_equalizer_with(&f, 2, &id, tight), Err(Error::CoefficientBlowup { budget_bits: 8 })));
    let low = Budget { degree: 4, ..Budget::default() };
    assert!(matches!(solve_equalizer_with(&f, 3, &id, low), Err(Error::DegreeBudgetExceeded { .. })));
    assert!(solve_equalizer_with(&f, 1, &id, Budget::default()).unwrap().all_verified());
}
