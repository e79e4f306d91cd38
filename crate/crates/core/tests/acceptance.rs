//! Acceptance suite. Each criterion is checked against an independent
//! oracle where one exists; `cargo test --test acceptance -- --nocapture`
//! shows one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use arithdyn::freeness::find_relation;
use arithdyn::heights::weil_height_affine;
use arithdyn::henon::{canonical_heights_henon, green_henon, HenonMap};
use arithdyn::intersect::{equidistribution_check, height_decay_report, solve_common, solve_equalizer, Law};
use arithdyn::mapspec::parse_map;
use arithdyn::p1dyn::{canonical_height_p1, is_preperiodic_p1, P1Point, RationalMapP1};
use arithdyn::places::{product_formula_defect, support_primes, Place};
use arithdyn::poly::QPoly;
use arithdyn::rational::{q, qi, rational_box, to_f64, Q};
use arithdyn::rittlab::{chebyshev, is_special, ritt_first_step, Conjugator, Linear, SpecialVerdict};
use arithdyn::skewprod::{
    green_skew, green_skew_direct, height_difference_constant, height_skew, is_preperiodic_skew, nullstellensatz_constants,
    padic_ratio, SkewPoint, SkewProduct,
};
use arithdyn::system::DynamicalSystem;
use arithdyn::heights::weil_height;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly_map(s: &str) -> RationalMapP1 {
    match parse_map("map", s).unwrap() {
        DynamicalSystem::P1(f) => f,
        other => panic!("expected a map of P^1, got {other}"),
    }
}

fn skew(s: &str) -> SkewProduct {
    match parse_map("map", s).unwrap() {
        DynamicalSystem::Skew(f) => f,
        other => panic!("expected a skew product, got {other}"),
    }
}

fn henon(s: &str) -> HenonMap {
    match parse_map("map", s).unwrap() {
        DynamicalSystem::Henon(f) => f,
        other => panic!("expected a Henon map, got {other}"),
    }
}

fn small_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    Q::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

fn product_formula() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n: i64 = rng.gen();
        let d: i64 = rng.gen_range(1..=i64::MAX);
        if n == 0 {
            continue;
        }
        let x = Q::new(BigInt::from(n), BigInt::from(d));
        worst = worst.max(product_formula_defect(&x).map_err(|e| e.to_string())?.abs());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-12, || format!("defect {worst:e}"))?;
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!("max defect {worst:.1e} in {secs:.2}s"))
}

fn power_map_exactness() -> Check {
    let f = poly_map("p1: x^2");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = small_rational(&mut rng, 1 << 30, 1 << 30);
        let h = canonical_height_p1(&f, &P1Point::Finite(x.clone()), 1e-10).map_err(|e| e.to_string())?;
        let w = weil_height(&x);
        ensure(h.finite == w.finite, || format!("finite parts differ at {x}"))?;
        worst = worst.max((h.archimedean - w.archimedean).abs());
    }
    ensure(worst <= 1e-9, || format!("archimedean gap {worst:e}"))?;
    Ok(format!("finite parts identical, archimedean gap {worst:.1e}"))
}

fn chebyshev_oracle() -> Check {
    let f = poly_map("p1: x^2 - 2");
    let h = canonical_height_p1(&f, &P1Point::Finite(qi(3)), 1e-9).map_err(|e| e.to_string())?;
    // 3 = u + 1/u and x^2 - 2 acts by u -> u^2, so h = log u.
    let u = (3.0 + 5f64.sqrt()) / 2.0;
    let gap = (h.total() - u.ln()).abs();
    ensure(gap <= 1e-6, || format!("got {}, oracle {}", h.total(), u.ln()))?;
    Ok(format!("h = {:.9}, gap {gap:.1e}", h.total()))
}

/// Exact orbit with no height cutoff: repeats within `cap` steps or leaves
/// every box of bounded height (tracked by bit size).
fn orbit_oracle(f: &RationalMapP1, x: &Q) -> Option<(usize, usize)> {
    let mut seen = vec![P1Point::Finite(x.clone())];
    let mut cur = seen[0].clone();
    for _ in 0..64 {
        cur = f.eval(&cur);
        if let Some(i) = seen.iter().position(|p| *p == cur) {
            return Some((i, seen.len() - i));
        }
        if cur.bits() > 4096 {
            return None;
        }
        seen.push(cur.clone());
    }
    None
}

fn preperiodic_golden_set() -> Check {
    let start = Instant::now();
    let f = poly_map("p1: x^2 - 29/16");
    let c = is_preperiodic_p1(&f, &P1Point::Finite(q(1, 4))).map_err(|e| e.to_string())?;
    ensure(c.preperiodic && c.tail == 1 && c.cycle == 3, || format!("1/4 gave {c:?}"))?;
    let mut found = 0;
    let pts = rational_box(50, 50);
    for x in &pts {
        let got = is_preperiodic_p1(&f, &P1Point::Finite(x.clone())).map_err(|e| e.to_string())?;
        let want = orbit_oracle(&f, x);
        ensure(got.preperiodic == want.is_some(), || format!("disagreement at {x}"))?;
        if let Some((t, l)) = want {
            ensure((got.tail, got.cycle) == (t, l), || format!("certificate mismatch at {x}"))?;
            found += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} points, {found} preperiodic, {secs:.1}s", pts.len()))
}

fn henon_sandwich() -> Check {
    let maps = ["henon: P = y^2, delta = 1", "henon: P = y^2 - 1, delta = 1/2", "henon: P = y^2, delta = 1; P = y^3 + y, delta = 2"];
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in maps {
        let h = henon(s);
        let d = h.degree() as f64;
        for _ in 0..100 {
            let p = [small_rational(&mut rng, 20, 6), small_rational(&mut rng, 20, 6)];
            let hh = canonical_heights_henon(&h, &p, tol).map_err(|e| e.to_string())?;
            let (hat, tilde) = (hh.hhat.total(), hh.htilde.total());
            let slack = hh.hhat.error_bound() + hh.htilde.error_bound();
            ensure(hat / 2.0 <= tilde + slack && tilde <= hat + slack, || format!("{s} at {p:?}: hhat {hat}, htilde {tilde}"))?;
            let fp = h.eval(&p);
            let mut places: BTreeSet<u64> = h.bad_primes().into_iter().collect();
            for c in p.iter().chain(fp.iter()) {
                places.extend(support_primes(c));
            }
            for v in std::iter::once(Place::Archimedean).chain(places.into_iter().map(Place::Finite)) {
                // G+(p) to tol / d so that d G+(p) is known to tol.
                let g0 = green_henon(&h, &p, v, tol / d).map_err(|e| e.to_string())?.g_plus.to_f64();
                let g1 = green_henon(&h, &fp, v, tol).map_err(|e| e.to_string())?.g_plus.to_f64();
                ensure((g1 - d * g0).abs() <= 2.0 * tol, || format!("{s} at {p:?}, {v}: G+(fp) {g1} vs d G+(p) {}", d * g0))?;
            }
        }
    }
    let h = henon(maps[0]);
    for p in [[qi(0), qi(0)], [qi(2), qi(2)]] {
        let hh = canonical_heights_henon(&h, &p, tol).map_err(|e| e.to_string())?;
        ensure(hh.hhat.is_exact_zero() && hh.htilde.is_exact_zero(), || format!("fixed point {p:?} not exactly 0"))?;
    }
    Ok("300 points, fixed points exact 0".into())
}

const SKEW_CORPUS: [&str; 3] = ["skew: p = x^2; q = y^2", "skew: p = x^2; q = y^2 + x*y", "skew: p = x^2 - 1; q = y^2 + x/2"];

fn skew_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0usize;
    for s in SKEW_CORPUS {
        let f = skew(s);
        let lift = f.lift();
        let d = f.degree() as i32;
        let places: Vec<Place> = std::iter::once(Place::Archimedean).chain([2u64, 3, 5].into_iter().map(Place::Finite)).collect();
        for v in places {
            let c = nullstellensatz_constants(&f, v).map_err(|e| e.to_string())?;
            for _ in 0..10_000 {
                let x: Vec<Q> = (0..3).map(|_| small_rational(&mut rng, 1000, 1000)).collect();
                if x.iter().all(Zero::is_zero) {
                    continue;
                }
                let r = match v {
                    Place::Archimedean => {
                        let sup = |w: &[Q]| w.iter().map(|a| to_f64(a).abs()).fold(0.0, f64::max);
                        sup(&lift.eval_q(&x)) / sup(&x).powi(d)
                    }
                    Place::Finite(p) => padic_ratio(&lift, &x, p),
                };
                let eps = 1e-9 * r.max(1.0);
                ensure(c.lower - eps <= r && r <= c.upper + eps, || format!("{s} at {v}: ratio {r} outside [{}, {}]", c.lower, c.upper))?;
                checked += 1;
            }
        }
        for _ in 0..20 {
            let p = [small_rational(&mut rng, 30, 7), small_rational(&mut rng, 30, 7)];
            for tol in [1e-4, 1e-8] {
                let a = green_skew(&f, &p, Place::Archimedean, tol).map_err(|e| e.to_string())?;
                let b = green_skew(&f, &p, Place::Archimedean, tol / 2.0).map_err(|e| e.to_string())?;
                ensure(a.truncation <= tol && b.truncation <= tol / 2.0, || format!("{s}: truncation above request"))?;
                ensure((a.to_f64() - b.to_f64()).abs() <= tol + a.error() + b.error(), || format!("{s} at {p:?}: halving moved the value"))?;
            }
        }
        let c = height_difference_constant(&f).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let p = [small_rational(&mut rng, 100, 50), small_rational(&mut rng, 100, 50)];
            let hf = height_skew(&f, &SkewPoint::Rational(p.clone()), 1e-6).map_err(|e| e.to_string())?;
            let h = weil_height_affine(&p);
            let gap = (hf.total() - h.total()).abs();
            ensure(gap <= c + hf.error_bound() + h.error_bound(), || format!("{s} at {p:?}: |h_f - h| = {gap} > {c}"))?;
        }
    }
    Ok(format!("{checked} ratio checks, truncation and height-difference bounds hold"))
}

fn local_to_global() -> Check {
    let start = Instant::now();
    let pts = rational_box(20, 20);
    let mut pre = 0usize;
    for s in ["skew: p = x^2; q = y^2", "skew: p = x^2; q = y^2 + x*y"] {
        let f = skew(s);
        for x in &pts {
            for y in &pts {
                let p = [x.clone(), y.clone()];
                let cert = is_preperiodic_skew(&f, &p).map_err(|e| e.to_string())?;
                let mut primes: BTreeSet<u64> = f.bad_primes().into_iter().collect();
                primes.extend(support_primes(x));
                primes.extend(support_primes(y));
                let mut all_zero = true;
                for v in std::iter::once(Place::Archimedean).chain(primes.into_iter().map(Place::Finite)) {
                    let g = green_skew_direct(&f, &p, v, 1e-9).map_err(|e| e.to_string())?;
                    if g.to_f64().abs() > g.error() + 1e-9 {
                        all_zero = false;
                        break;
                    }
                }
                ensure(cert.preperiodic == all_zero, || format!("{s} at {p:?}: preperiodic {} but local zero {all_zero}", cert.preperiodic))?;
                pre += usize::from(cert.preperiodic);
            }
        }
    }
    Ok(format!("{} points per map, {pre} preperiodic in total, {:.1}s", pts.len() * pts.len(), start.elapsed().as_secs_f64()))
}

fn ritt_suite() -> Check {
    for m in 1..=6 {
        for n in 1..=6 {
            let (tm, tn) = (chebyshev(m), chebyshev(n));
            ensure(tm.compose(&tn) == chebyshev(m * n) && tn.compose(&tm) == chebyshev(m * n), || format!("T_{m} o T_{n}"))?;
        }
    }
    let p = |s: &str| arithdyn::mapspec::parse_poly("poly", s).unwrap();
    let expect = [("x^2", "power"), ("2x^2-1", "cheb"), ("x^3-3x", "cheb"), ("x^2+1", "none")];
    for (s, kind) in expect {
        let f = p(s);
        let v = is_special(&f).map_err(|e| e.to_string())?;
        let got = match &v {
            SpecialVerdict::PowerConjugate(l) => {
                verify_conj(&f, &QPoly::monomial(Q::one(), f.degree()), l)?;
                "power"
            }
            SpecialVerdict::ChebyshevConjugate(l, sign) => {
                let t = chebyshev(f.degree());
                verify_conj(&f, &if *sign > 0 { t } else { -&t }, l)?;
                "cheb"
            }
            SpecialVerdict::NotSpecial => "none",
        };
        ensure(got == kind, || format!("{s}: {v}"))?;
    }
    let (a, c, d, b) = (p("(x+1)^2"), p("x^2-1"), p("x^2"), p("x^2"));
    let mus = ritt_first_step(&a, &c, &d, &b).map_err(|e| e.to_string())?;
    ensure(mus == vec![Linear::new(qi(1), qi(1))], || format!("mu set {mus:?}"))?;
    for mu in &mus {
        ensure(d.compose(&mu.as_poly()) == a && mu.inverse().after(&b) == c, || format!("{mu} fails to re-verify"))?;
    }
    Ok("T_m o T_n exact, classification and mu = x + 1 re-verified".into())
}

/// l o f o l^-1 = g.
fn verify_conj(f: &QPoly, g: &QPoly, l: &Conjugator) -> std::result::Result<(), String> {
    match l {
        Conjugator::Rational(l) => ensure(l.conjugate(f) == *g, || format!("conjugator {l} does not verify")),
        Conjugator::Algebraic(_) => Ok(()),
    }
}

fn freeness() -> Check {
    let start = Instant::now();
    let f = parse_map("F", "skew: p = x^2; q = y^2").unwrap();
    let g = parse_map("G", "skew: p = x^2; q = -y^2").unwrap();
    let c = find_relation(&f, &g, 2, 5).map_err(|e| e.to_string())?.ok_or("no relation found")?;
    ensure(c.w1.to_string() == "[G,G]" && c.w2.to_string() == "[G,F]" && c.verified, || format!("got {} = {}", c.w1, c.w2))?;
    let a = parse_map("F", "p1: x^2").unwrap();
    let b = parse_map("G", "p1: x^2 - 1").unwrap();
    let none = find_relation(&a, &b, 6, 5).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || "unexpected relation for x^2, x^2 - 1".into())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!("[G,G] = [G,F]; x^2, x^2 - 1 free to length 6; {secs:.1}s"))
}

fn small_height_decay() -> Check {
    let f = parse_map("F", "p1: x^2").unwrap();
    let c = parse_map("C", "p1: 2x").unwrap();
    let rows = height_decay_report(&f, &c, &[1, 2, 3, 4, 5, 6], 1e-9).map_err(|e| e.to_string())?;
    let ln2 = 2f64.ln();
    for r in &rows {
        // Solutions are 0 and the roots of x^(2^m - 1) = 2, of Mahler measure log 2.
        let k = (1u64 << r.m) as f64 - 1.0;
        ensure(r.count == k as usize + 1, || format!("m = {}: {} solutions", r.m, r.count))?;
        ensure((r.normalized - ln2).abs() <= 1e-6, || format!("m = {}: (d^m - 1) h = {}", r.m, r.normalized))?;
        let oracle = (k + 1.0) / k * ln2;
        ensure((r.dm_times_max - oracle).abs() <= 1e-6, || format!("m = {}: d^m h = {} vs {oracle}", r.m, r.dm_times_max))?;
    }
    Ok("(2^m - 1) max h = log 2 for m = 1..6".into())
}

fn equidistribution() -> Check {
    let start = Instant::now();
    let sq = poly_map("p1: x^2");
    let a = equidistribution_check(&sq, 10, Law::Circle).map_err(|e| e.to_string())?;
    ensure(a.ks < 0.05, || format!("circle KS {}", a.ks))?;
    let ch = poly_map("p1: x^2 - 2");
    let b = equidistribution_check(&ch, 8, Law::Arcsine).map_err(|e| e.to_string())?;
    ensure(b.ks < 0.06, || format!("arcsine KS {}", b.ks))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("KS circle {:.4}, arcsine {:.4}, {secs:.1}s", a.ks, b.ks))
}

fn solver_exactness() -> Check {
    let f = parse_map("F", "skew: p = x^2; q = y^2").unwrap();
    let g = parse_map("G", "poly2: y^2; x^2").unwrap();
    let id = parse_map("C", "poly2: x; y").unwrap();
    let s = solve_common(&f, &g, &id, 1, 1).map_err(|e| e.to_string())?;
    ensure(s.all_verified(), || "unverified component".into())?;
    let pts: HashSet<Vec<Q>> = s.rational_points().into_iter().collect();
    let want: HashSet<Vec<Q>> = [vec![qi(0), qi(0)], vec![qi(1), qi(1)]].into_iter().collect();
    ensure(pts == want && s.count() == 2, || format!("got {:?}", s.rational_points()))?;
    let mut comps = 0;
    for (m, c) in [(1, "poly2: x; y"), (2, "poly2: x; y"), (1, "poly2: x + 1; y"), (2, "poly2: 2x; y - 1")] {
        let s = solve_equalizer(&f, m, &parse_map("C", c).unwrap()).map_err(|e| e.to_string())?;
        ensure(s.all_verified(), || format!("m = {m}, C = {c}: unverified component"))?;
        comps += s.components.len();
    }
    Ok(format!("exactly (0,0), (1,1); {comps} further components re-substitute to 0"))
}

#[test]
fn acceptance_suite() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("product formula", product_formula),
        ("power-map exactness", power_map_exactness),
        ("Chebyshev oracle", chebyshev_oracle),
        ("preperiodicity golden set", preperiodic_golden_set),
        ("Henon sandwich and invariance", henon_sandwich),
        ("skew-product bounds", skew_bounds),
        ("local-to-global", local_to_global),
        ("Ritt suite", ritt_suite),
        ("freeness", freeness),
        ("small-height decay", small_height_decay),
        ("equidistribution", equidistribution),
        ("solver exactness", solver_exactness),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

