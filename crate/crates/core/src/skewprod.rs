//! Regular polynomial skew products f(x, y) = (p(x), q(x, y)) with
//! deg p = deg q = d and a nonzero y^d term.
//!
//! The lift F(x, y, z) = (z^d p(x/z), z^d q(x/z, y/z), z^d) has no common
//! zero besides the origin, so C' ||X||^d <= ||F(X)|| <= C ||X||^d at every
//! place and the Green function of F restricted to z = 1 is the local
//! height g_{f,v}.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::heights::{log_plus_c, weil_height_affine, weil_height_point, AlgebraicPoint, HeightValue};
use crate::homog::{green_arch, green_padic, lower_exponent, normalize_q, HomogMap, LogBounds};
use crate::p1dyn::{is_preperiodic_p1, P1Point, PreperiodicCert, RationalMapP1, ORBIT_BIT_CAP};
use crate::places::{primes_of, LocalGreen, Place};
use crate::poly::QPoly;
use crate::rational::{bits, to_f64, val, Q};

/// v -> M v + t on Q^2.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine2 {
    pub m: [[Q; 2]; 2],
    pub t: [Q; 2],
}

impl Affine2 {
    pub fn identity() -> Self {
        Affine2 { m: [[Q::one(), Q::zero()], [Q::zero(), Q::one()]], t: [Q::zero(), Q::zero()] }
    }

    pub fn det(&self) -> Q {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, v: &[Q; 2]) -> [Q; 2] {
        [
            &self.m[0][0] * &v[0] + &self.m[0][1] * &v[1] + &self.t[0],
            &self.m[1][0] * &v[0] + &self.m[1][1] * &v[1] + &self.t[1],
        ]
    }

    pub fn inverse(&self) -> Result<Affine2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::InvalidInput("sigma is not invertible".into()));
        }
        let m = [
            [&self.m[1][1] / &det, -&self.m[0][1] / &det],
            [-&self.m[1][0] / &det, &self.m[0][0] / &det],
        ];
        let t = [
            -(&m[0][0] * &self.t[0] + &m[0][1] * &self.t[1]),
            -(&m[1][0] * &self.t[0] + &m[1][1] * &self.t[1]),
        ];
        Ok(Affine2 { m, t })
    }

    fn as_polys(&self) -> [QPoly2; 2] {
        let row = |i: usize| {
            &(&QPoly2::x().scale(&self.m[i][0]) + &QPoly2::y().scale(&self.m[i][1])) + &QPoly2::constant(self.t[i].clone())
        };
        [row(0), row(1)]
    }
}

#[derive(Debug, Clone)]
pub struct SkewProduct {
    p: QPoly,
    q: QPoly2,
    d: usize,
    sigma: Option<Affine2>,
    constants: OnceLock<BTreeMap<Place, NullstellensatzConstants>>,
}

impl PartialEq for SkewProduct {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q && self.sigma == o.sigma
    }
}

impl SkewProduct {
    pub fn new(p: QPoly, q: QPoly2) -> Result<Self> {
        let d = p.degree();
        if d < 2 {
            return Err(Error::InvalidInput("skew product needs deg p >= 2".into()));
        }
        if q.total_degree() != d {
            return Err(Error::NotRegular(format!("deg q = {} differs from deg p = {d}", q.total_degree())));
        }
        if q.coeff(0, d).is_zero() {
            return Err(Error::NotRegular("q has no y^d term".into()));
        }
        Ok(SkewProduct { p, q, d, sigma: None, constants: OnceLock::new() })
    }

    /// Attaches a normalizing affine change of coordinates; it must preserve
    /// the fibration (the new x depends on x only).
    pub fn with_sigma(mut self, sigma: Affine2) -> Result<Self> {
        if !sigma.m[0][1].is_zero() {
            return Err(Error::InvalidInput("sigma must map vertical lines to vertical lines".into()));
        }
        sigma.inverse()?;
        self.sigma = Some(sigma);
        Ok(self)
    }

    pub fn p(&self) -> &QPoly {
        &self.p
    }

    pub fn q(&self) -> &QPoly2 {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> Option<&Affine2> {
        self.sigma.as_ref()
    }

    pub fn eval(&self, v: &[Q; 2]) -> [Q; 2] {
        [self.p.eval(&v[0]), self.q.eval(&v[0], &v[1])]
    }

    pub fn as_polys(&self) -> (QPoly2, QPoly2) {
        (QPoly2::from_x(&self.p), self.q.clone())
    }

    /// f o g.
    pub fn compose(&self, g: &SkewProduct) -> SkewProduct {
        let (gp, gq) = g.as_polys();
        let p = self.p.compose(&g.p);
        let q = self.q.compose(&gp, &gq);
        SkewProduct::new(p, q).expect("composite of regular skew products is regular")
    }

    /// sigma o f o sigma^-1 (f itself when no sigma is attached).
    pub fn normalized(&self) -> Result<SkewProduct> {
        let Some(s) = &self.sigma else {
            return Ok(SkewProduct::new(self.p.clone(), self.q.clone())?);
        };
        let [u, v] = s.inverse()?.as_polys();
        let (fp, fq) = self.as_polys();
        let (a, b) = (fp.compose(&u, &v), fq.compose(&u, &v));
        let [s0, s1] = s.as_polys();
        let (na, nb) = (s0.compose(&a, &b), s1.compose(&a, &b));
        let p = na.as_x_poly().ok_or_else(|| Error::InvalidInput("normalized first coordinate depends on y".into()))?;
        SkewProduct::new(p, nb)
    }

    /// The homogeneous lift (p~, q~, z^d) in variables (x, y, z).
    pub fn lift(&self) -> HomogMap {
        let d = self.d as u32;
        let pf = self.p.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32, 0, d - i as u32], c.clone())).collect();
        let qf = self.q.terms().into_iter().map(|(i, j, c)| (vec![i as u32, j as u32, d - (i + j) as u32], c)).collect();
        let zf = vec![(vec![0, 0, d], Q::one())];
        HomogMap::new(3, d, vec![pf, qf, zf])
    }

    fn a(&self) -> Q {
        self.p.lc()
    }

    fn b(&self) -> Q {
        self.q.coeff(0, self.d)
    }

    /// Denominators of coefficients and the primes of a = lc(p) and b = [y^d] q.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out = BTreeSet::new();
        for c in self.p.coeffs().iter().chain(self.q.coefficients().iter()) {
            out.extend(primes_of(c.denom()));
        }
        out.extend(primes_of(self.a().numer()));
        out.extend(primes_of(self.b().numer()));
        out.into_iter().collect()
    }

    fn has_good_reduction(&self, p: u64) -> bool {
        !self.bad_primes().contains(&p)
    }

    fn constants_table(&self) -> Result<&BTreeMap<Place, NullstellensatzConstants>> {
        if let Some(t) = self.constants.get() {
            return Ok(t);
        }
        let mut t = BTreeMap::new();
        for v in std::iter::once(Place::Archimedean).chain(self.bad_primes().into_iter().map(Place::Finite)) {
            t.insert(v, compute_constants(self, v)?);
        }
        Ok(self.constants.get_or_init(|| t))
    }
}

/// C_v >= 1 and C'_v in (0, 1] bounding ||F(X)||_v / ||X||_v^d, plus the
/// sampled extremes of that ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct NullstellensatzConstants {
    pub place: Place,
    pub upper: f64,
    pub lower: f64,
    pub sampled_min: f64,
    pub sampled_max: f64,
}

impl NullstellensatzConstants {
    pub fn log_bounds(&self) -> LogBounds {
        LogBounds { upper: self.upper.ln(), lower: self.lower.ln() }
    }
}

pub fn nullstellensatz_constants(f: &SkewProduct, v: Place) -> Result<NullstellensatzConstants> {
    if let Some(c) = f.constants_table()?.get(&v) {
        return Ok(c.clone());
    }
    compute_constants(f, v)
}

fn abs_v(c: &Q, v: Place) -> f64 {
    match v {
        Place::Archimedean => to_f64(c).abs(),
        Place::Finite(p) => val(c, p).map_or(0.0, |e| (p as f64).powi(-e as i32)),
    }
}

fn compute_constants(f: &SkewProduct, v: Place) -> Result<NullstellensatzConstants> {
    let d = f.d;
    if let Place::Finite(p) = v {
        if f.has_good_reduction(p) {
            return Ok(NullstellensatzConstants { place: v, upper: 1.0, lower: 1.0, sampled_min: 1.0, sampled_max: 1.0 });
        }
    }
    let ultra = !v.is_archimedean();
    let norm_p = f.p.coeffs().iter().map(|c| abs_v(c, v)).fold(0.0, f64::max);
    let norm_q = f.q.coefficients().iter().map(|c| abs_v(c, v)).fold(0.0, f64::max);
    let (delta1, delta2) = if ultra { (1.0, 1.0) } else { ((d + 1) as f64, ((d + 2) * (d + 1) / 2) as f64) };
    let upper = (delta1 * norm_p).max(delta2 * norm_q).max(1.0);
    let a = abs_v(&f.a(), v);
    let b = abs_v(&f.b(), v);
    let combine = |acc: f64, x: f64| if ultra { acc.max(x) } else { acc + x };
    let p1 = f.p.coeffs()[..d].iter().map(|c| abs_v(c, v)).fold(0.0, combine);
    let q1 = f.q.terms().into_iter().filter(|(i, j, _)| !(*i == 0 && *j == d)).map(|(_, _, c)| abs_v(&c, v)).fold(0.0, combine);
    let mut lower = 0.0;
    for n in [256usize, 2048] {
        lower = grid_lower_bound(n, d as i32, a, p1, b, q1, ultra);
        if lower > 0.0 {
            break;
        }
    }
    if !(lower > 0.0) {
        return Err(Error::PrecisionExhausted(format!("could not certify a positive lower constant at {v}")));
    }
    let (sampled_min, sampled_max) = sample_ratio(f, v);
    Ok(NullstellensatzConstants { place: v, upper, lower: lower.min(1.0), sampled_min, sampled_max })
}

/// Rigorous lower bound for max(|z|^d, |p~|, |q~|) on the unit sup-sphere,
/// by cases on which coordinate attains the norm and a cell-wise bound on
/// an n x n grid in (|x|, |z|).
fn grid_lower_bound(n: usize, d: i32, a: f64, p1: f64, b: f64, q1: f64, ultra: bool) -> f64 {
    let lp = |xi: f64, zeta: f64| {
        let main = a * xi.powi(d);
        if ultra {
            if main > p1 * zeta { main } else { 0.0 }
        } else {
            main - p1 * zeta
        }
    };
    let lq = |m: f64| {
        if ultra {
            if b > q1 * m { b } else { 0.0 }
        } else {
            b - q1 * m
        }
    };
    let h = 1.0 / n as f64;
    let mut best = 1.0f64;
    for i in 0..n {
        let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
        for k in 0..n {
            let (z0, z1) = (k as f64 * h, (k + 1) as f64 * h);
            // |y| = 1.
            let cell = z0.powi(d).max(lp(x0, z1)).max(lq(x1.max(z1)));
            best = best.min(cell);
        }
    }
    for k in 0..n {
        let (z0, z1) = (k as f64 * h, (k + 1) as f64 * h);
        // |x| = 1, |y| <= 1.
        best = best.min(z0.powi(d).max(lp(1.0, z1)));
    }
    best
}

fn sample_ratio(f: &SkewProduct, v: Place) -> (f64, f64) {
    let lift = f.lift();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c3);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..2000 {
        let r = match v {
            Place::Archimedean => {
                let x: Vec<Complex64> = (0..3).map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..6.3))).collect();
                let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let y: Vec<Complex64> = x.iter().map(|z| z / m).collect();
                let (fy, _) = lift.eval_c(&y);
                fy.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
            Place::Finite(p) => {
                let x: Vec<Q> = (0..3).map(|_| Q::new(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(rng.gen_range(1i64..=1000)))).collect();
                if x.iter().all(|c| c.is_zero()) {
                    continue;
                }
                padic_ratio(&lift, &x, p)
            }
        };
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// ||F(X)||_p / ||X||_p^d for a rational X != 0.
pub fn padic_ratio(lift: &HomogMap, x: &[Q], p: u64) -> f64 {
    let m = |v: &[Q]| v.iter().filter_map(|c| val(c, p)).min();
    let fx = lift.eval_q(x);
    match (m(&fx), m(x)) {
        (Some(a), Some(b)) => (p as f64).powi(-(a - lift.degree() as i64 * b) as i32),
        _ => 0.0,
    }
}

/// Local Green function g_{f,v}(x, y) = G_{F,v}(x, y, 1).
pub fn green_skew(f: &SkewProduct, point: &[Q; 2], v: Place, tol: f64) -> Result<LocalGreen> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if is_preperiodic_skew(f, point)?.preperiodic {
        return Ok(LocalGreen::exact_zero(v));
    }
    green_skew_direct(f, point, v, tol)
}

/// The iteration itself, without the preperiodic shortcut.
pub fn green_skew_direct(f: &SkewProduct, point: &[Q; 2], v: Place, tol: f64) -> Result<LocalGreen> {
    let x = [point[0].clone(), point[1].clone(), Q::one()];
    let lift = f.lift();
    match v {
        Place::Archimedean => {
            let c = nullstellensatz_constants(f, v)?;
            let (ln, y) = normalize_q(&x);
            let g = green_arch(&lift, ln, &y, c.log_bounds(), tol);
            Ok(LocalGreen::numeric(g.value, g.rounding, g.truncation))
        }
        Place::Finite(p) => {
            if f.has_good_reduction(p) {
                let m = x.iter().filter_map(|c| val(c, p)).min().unwrap();
                return Ok(LocalGreen::log_p(p, Q::from_integer(BigInt::from(-m)), 0.0));
            }
            let c = nullstellensatz_constants(f, v)?;
            let g = green_padic(&lift, &x, p, lift.neg_val(p), lower_exponent(c.lower, p), tol)?;
            Ok(LocalGreen::log_p(p, g.exponent, g.truncation))
        }
    }
}

/// Places where g_{f,v} can differ from zero at the point.
fn places_for(f: &SkewProduct, point: &[Q; 2]) -> Vec<Place> {
    let mut primes: BTreeSet<u64> = f.bad_primes().into_iter().collect();
    for c in point {
        primes.extend(primes_of(c.denom()));
    }
    std::iter::once(Place::Archimedean).chain(primes.into_iter().map(Place::Finite)).collect()
}

/// A point for height computations: rational, or algebraic with an exact
/// joint parametrization.
#[derive(Debug, Clone, PartialEq)]
pub enum SkewPoint {
    Rational([Q; 2]),
    Algebraic(AlgebraicPoint),
}

/// h_f = sum_v g_{f,v}, in the sigma-normalized coordinates when sigma is set.
pub fn height_skew(f: &SkewProduct, point: &SkewPoint, tol: f64) -> Result<HeightValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if let Some(s) = &f.sigma {
        let g = f.normalized()?;
        let moved = match point {
            SkewPoint::Rational(v) => SkewPoint::Rational(s.apply(v)),
            SkewPoint::Algebraic(pt) => {
                let [u, w] = s.as_polys();
                let c = pt.coords();
                let comp = |e: &QPoly2| {
                    e.terms().into_iter().fold(QPoly::zero(), |acc, (i, j, a)| &acc + &(&c[0].pow(i as u32) * &c[1].pow(j as u32)).scale(&a))
                };
                SkewPoint::Algebraic(AlgebraicPoint::new(pt.field(), vec![comp(&u), comp(&w)])?)
            }
        };
        return height_skew(&g, &moved, tol);
    }
    match point {
        SkewPoint::Rational(v) => {
            if is_preperiodic_skew(f, v)?.preperiodic {
                return Ok(HeightValue::zero());
            }
            let places = places_for(f, v);
            let t = tol / places.len() as f64;
            let mut h = HeightValue::zero();
            for pl in places {
                h = h.add(&green_skew_direct(f, v, pl, t)?.to_height());
            }
            Ok(h)
        }
        SkewPoint::Algebraic(pt) => {
            if let Some(r) = pt.as_rational() {
                return height_skew(f, &SkewPoint::Rational([r[0].clone(), r[1].clone()]), tol);
            }
            if is_preperiodic_skew_algebraic(f, pt)?.preperiodic {
                return Ok(HeightValue::zero());
            }
            if !f.bad_primes().is_empty() {
                return Err(Error::Unsupported("skew heights of algebraic points at places of bad reduction".into()));
            }
            let lift = f.lift();
            let c = nullstellensatz_constants(f, Place::Archimedean)?;
            let n = pt.degree() as f64;
            let (mut value, mut rounding, mut trunc) = (0.0, 0.0, 0.0f64);
            for vals in pt.conjugate_values() {
                let zs: Vec<Complex64> = vals.iter().map(|(z, _)| *z).chain(std::iter::once(Complex64::new(1.0, 0.0))).collect();
                let m = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let y: Vec<Complex64> = zs.iter().map(|z| z / m).collect();
                let g = green_arch(&lift, m.ln(), &y, c.log_bounds(), tol);
                let perturb: f64 = vals.iter().map(|(z, r)| log_plus_c(*z, *r).1).fold(0.0, f64::max);
                value += g.value;
                rounding += g.rounding + perturb * f.d as f64;
                trunc = trunc.max(g.truncation);
            }
            let mut h = HeightValue::archimedean_only(value / n, rounding / n);
            h.truncation_error = trunc;
            for (b, e) in pt.finite_log_plus()? {
                h.add_finite_big(b, e);
            }
            Ok(h)
        }
    }
}

/// C with |h(f(P)) - d h(P)| <= C for all P.
pub fn height_difference_constant(f: &SkewProduct) -> Result<f64> {
    let mut up = 0.0;
    let mut down = 0.0;
    for (v, c) in f.constants_table()? {
        let lnp = match v {
            Place::Archimedean => 1.0,
            Place::Finite(_) => 1.0,
        };
        up += c.upper.ln() * lnp;
        down -= c.lower.ln() * lnp;
    }
    Ok(f64::max(up, down))
}

/// Exact orbit search with a Weil-height cutoff C/(d - 1) + 1.
pub fn is_preperiodic_skew(f: &SkewProduct, point: &[Q; 2]) -> Result<PreperiodicCert> {
    let cutoff = height_difference_constant(f)? / (f.d as f64 - 1.0) + 1.0;
    let mut seen: HashMap<[Q; 2], usize> = HashMap::new();
    let mut y = point.clone();
    for k in 0.. {
        if let Some(&j) = seen.get(&y) {
            return Ok(PreperiodicCert { preperiodic: true, tail: j, cycle: k - j, steps: k });
        }
        if weil_height_affine(&y).total() > cutoff {
            return Ok(PreperiodicCert { preperiodic: false, tail: 0, cycle: 0, steps: k });
        }
        if bits(&y[0]) + bits(&y[1]) > ORBIT_BIT_CAP {
            return Err(Error::PrecisionExhausted(format!("orbit point exceeded {ORBIT_BIT_CAP} bits")));
        }
        let next = f.eval(&y);
        seen.insert(std::mem::replace(&mut y, next), k);
    }
    unreachable!()
}

fn coordinate_height(field: &QPoly, c: &QPoly) -> Result<f64> {
    let h = weil_height_point(&AlgebraicPoint::new(field, vec![c.clone()])?)?;
    Ok(h.total() - h.error_bound())
}

/// Orbit search in Q(theta)^2; max of the coordinate heights bounds h from below.
pub fn is_preperiodic_skew_algebraic(f: &SkewProduct, pt: &AlgebraicPoint) -> Result<PreperiodicCert> {
    let cutoff = height_difference_constant(f)? / (f.d as f64 - 1.0) + 1.0;
    let r = pt.field().clone();
    let mut seen: HashMap<(Vec<Q>, Vec<Q>), usize> = HashMap::new();
    let (mut x, mut y) = (pt.coords()[0].clone(), pt.coords()[1].clone());
    for k in 0.. {
        let key = (x.coeffs().to_vec(), y.coeffs().to_vec());
        if let Some(&j) = seen.get(&key) {
            return Ok(PreperiodicCert { preperiodic: true, tail: j, cycle: k - j, steps: k });
        }
        if coordinate_height(&r, &x)?.max(coordinate_height(&r, &y)?) > cutoff {
            return Ok(PreperiodicCert { preperiodic: false, tail: 0, cycle: 0, steps: k });
        }
        if x.coeffs().iter().chain(y.coeffs()).map(bits).sum::<u64>() > ORBIT_BIT_CAP {
            return Err(Error::PrecisionExhausted(format!("orbit point exceeded {ORBIT_BIT_CAP} bits")));
        }
        seen.insert(key, k);
        let nx = f.p.compose(&x).rem(&r);
        let ny = f.q.terms().into_iter().fold(QPoly::zero(), |acc, (i, j, a)| {
            (&acc + &(&x.pow(i as u32) * &y.pow(j as u32)).scale(&a)).rem(&r)
        });
        x = nx;
        y = ny;
    }
    unreachable!()
}

/// q(x_{n-1}, .) o ... o q(x_0, .) along the p-cycle of x0.
pub fn fiber_composition(f: &SkewProduct, x0: &Q) -> Result<QPoly> {
    let base = RationalMapP1::polynomial(f.p.clone())?;
    let cert = is_preperiodic_p1(&base, &P1Point::Finite(x0.clone()))?;
    if !cert.preperiodic || cert.tail != 0 {
        return Err(Error::NotPeriodic);
    }
    let mut g = QPoly::x();
    let mut x = x0.clone();
    for _ in 0..cert.cycle {
        g = f.q.eval_x(&x).compose(&g);
        x = f.p.eval(&x);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn power() -> SkewProduct {
        SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1))])).unwrap()
    }

    fn mixed() -> SkewProduct {
        SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1)), (1, 1, qi(1))])).unwrap()
    }

    #[test]
    fn constants_examples() {
        let c = nullstellensatz_constants(&power(), Place::Archimedean).unwrap();
        assert_eq!(c.upper, 6.0);
        assert!((c.sampled_min - 1.0).abs() < 1e-12 && (c.sampled_max - 1.0).abs() < 1e-12);
        assert!(c.lower > 0.0 && c.lower <= 1.0);
        let c = nullstellensatz_constants(&mixed(), Place::Archimedean).unwrap();
        assert_eq!(c.upper, 6.0);
        let c = nullstellensatz_constants(&mixed(), Place::Finite(5)).unwrap();
        assert_eq!((c.upper, c.lower), (1.0, 1.0));
        assert!(power().bad_primes().is_empty());
    }

    #[test]
    fn regularity_is_checked() {
        let e = SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(1, 1, qi(1))])).unwrap_err();
        assert!(matches!(e, Error::NotRegular(_)));
    }

    #[test]
    fn green_and_height_examples() {
        let g = green_skew(&power(), &[qi(2), qi(3)], Place::Archimedean, 1e-9).unwrap();
        assert!((g.to_f64() - 3f64.ln()).abs() < 1e-9);
        assert!(green_skew(&power(), &[qi(1), qi(1)], Place::Finite(3), 1e-9).unwrap().is_exact_zero());
        assert!(green_skew(&mixed(), &[qi(0), qi(0)], Place::Archimedean, 1e-9).unwrap().is_exact_zero());
        let h = height_skew(&power(), &SkewPoint::Rational([qi(2), qi(3)]), 1e-9).unwrap();
        assert!((h.total() - 3f64.ln()).abs() < 1e-9);
        assert!(height_skew(&power(), &SkewPoint::Rational([qi(-1), qi(1)]), 1e-9).unwrap().is_exact_zero());
    }

    #[test]
    fn preperiodic_examples() {
        assert!(is_preperiodic_skew(&power(), &[qi(0), qi(0)]).unwrap().preperiodic);
        assert!(!is_preperiodic_skew(&power(), &[qi(2), qi(0)]).unwrap().preperiodic);
        let c = is_preperiodic_skew(&power(), &[qi(-1), qi(1)]).unwrap();
        assert_eq!((c.preperiodic, c.tail, c.cycle), (true, 1, 1));
    }

    #[test]
    fn fiber_examples() {
        assert_eq!(fiber_composition(&power(), &qi(1)).unwrap(), QPoly::from_ints(&[0, 0, 1]));
        let f = SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1)), (1, 0, qi(1))])).unwrap();
        assert_eq!(fiber_composition(&f, &qi(0)).unwrap(), QPoly::from_ints(&[0, 0, 1]));
        let f = SkewProduct::new(QPoly::from_ints(&[-1, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1)), (1, 0, qi(1))])).unwrap();
        assert_eq!(fiber_composition(&f, &qi(0)).unwrap(), QPoly::from_ints(&[-1, 0, 0, 0, 1]));
        assert_eq!(fiber_composition(&power(), &qi(2)).unwrap_err(), Error::NotPeriodic);
    }

    #[test]
    fn sigma_normalization_round_trips() {
        let s = Affine2 { m: [[qi(2), qi(0)], [qi(1), qi(1)]], t: [qi(1), q(1, 2)] };
        let f = mixed().with_sigma(s.clone()).unwrap();
        let g = f.normalized().unwrap();
        let pnt = [qi(3), q(-1, 3)];
        assert_eq!(g.eval(&s.apply(&pnt)), s.apply(&mixed().eval(&pnt)));
    }

    #[test]
    fn bad_prime_green_is_invariant() {
        let f = SkewProduct::new(QPoly::new(vec![q(1, 2), qi(0), qi(1)]), QPoly2::from_terms(&[(0, 2, qi(3)), (1, 1, qi(1))])).unwrap();
        let p = [q(1, 3), qi(2)];
        for v in [Place::Archimedean, Place::Finite(2), Place::Finite(3)] {
            let g0 = green_skew_direct(&f, &p, v, 1e-10).unwrap();
            let g1 = green_skew_direct(&f, &f.eval(&p), v, 1e-10).unwrap();
            assert!((g1.to_f64() - 2.0 * g0.to_f64()).abs() < 1e-8, "{v}");
        }
    }
}
