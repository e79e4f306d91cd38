use arithdyn::heights::weil_height_affine;
use arithdyn::homog::{green_arch, normalize_q};
use arithdyn::mapspec::parse_map;
use arithdyn::places::Place;
use arithdyn::rational::Q;
use arithdyn::skewprod::{green_skew, nullstellensatz_constants, SkewProduct};
use arithdyn::system::DynamicalSystem;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

const CORPUS: [&str; 3] = ["skew: p = x^2; q = y^2", "skew: p = x^2; q = y^2 + x*y", "skew: p = x^2 - 1; q = y^2 + x/2"];

fn map(s: &str) -> SkewProduct {
    match parse_map("map", s).unwrap() {
        DynamicalSystem::Skew(f) => f,
        _ => unreachable!(),
    }
}

fn point() -> impl Strategy<Value = [Q; 2]> {
    ((-40i64..=40, 1i64..=9), (-40i64..=40, 1i64..=9))
        .prop_map(|((a, b), (c, d))| [Q::new(BigInt::from(a), BigInt::from(b)), Q::new(BigInt::from(c), BigInt::from(d))])
}

fn place() -> impl Strategy<Value = Place> {
    prop::sample::select(vec![Place::Archimedean, Place::Finite(2), Place::Finite(3)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invariance(i in 0usize..3, p in point(), v in place()) {
        let f = map(CORPUS[i]);
        let d = f.degree() as f64;
        let tol = 1e-8;
        let a = green_skew(&f, &f.eval(&p), v, tol).unwrap();
        let b = green_skew(&f, &p, v, tol / d).unwrap();
        prop_assert!((a.to_f64() - d * b.to_f64()).abs() <= 2.0 * tol + a.error() + d * b.error());
    }

    #[test]
    fn green_close_to_log_plus_norm(i in 0usize..3, p in point(), v in place()) {
        let f = map(CORPUS[i]);
        let c = nullstellensatz_constants(&f, v).unwrap().log_bounds();
        let g = green_skew(&f, &p, v, 1e-8).unwrap();
        let log_plus = match v {
            Place::Archimedean => weil_height_affine(&p).archimedean,
            Place::Finite(q) => {
                let key = arithdyn::heights::prime_key(q);
                weil_height_affine(&p).finite.get(&key).map_or(0.0, |e| arithdyn::rational::to_f64(e) * (q as f64).ln())
            }
        };
        let bound = c.spread() / (f.degree() as f64 - 1.0);
        prop_assert!((g.to_f64() - log_plus).abs() <= bound + g.error() + 1e-9, "{} at {:?}, {}", CORPUS[i], p, v);
    }

    #[test]
    fn lift_homogeneity(i in 0usize..3, p in point(), lam in (1i64..=50, 1i64..=50)) {
        let f = map(CORPUS[i]);
        let lift = f.lift();
        let bounds = nullstellensatz_constants(&f, Place::Archimedean).unwrap().log_bounds();
        let l = Q::new(BigInt::from(lam.0), BigInt::from(lam.1));
        let x = [p[0].clone(), p[1].clone(), Q::one()];
        let lx: Vec<Q> = x.iter().map(|c| c * &l).collect();
        let (n0, y0) = normalize_q(&x);
        let (n1, y1) = normalize_q(&lx);
        let a = green_arch(&lift, n0, &y0, bounds, 1e-9);
        let b = green_arch(&lift, n1, &y1, bounds, 1e-9);
        let shift = (lam.0 as f64 / lam.1 as f64).ln();
        prop_assert!((b.value - a.value - shift).abs() <= 2e-9 + a.rounding + b.rounding);
    }
}
