//! Rational maps on P^1 and split endomorphisms of (P^1)^n: evaluation,
//! explicit height-difference constants, canonical heights as sums of local
//! Green functions, and exact preperiodicity detection.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::heights::{log_plus_c, AlgebraicNumber, AlgebraicPoint, HeightValue};
use crate::homog::{green_arch, green_padic, normalize_q, HomogMap, LogBounds};
use crate::intfactor::factor_biguint;
use crate::places::{primes_of, LocalGreen, Place};
use crate::poly::QPoly;
use crate::rational::{bits, ln_bigint, val, Q};
use crate::resultant::resultant;

/// A point of P^1(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point {
    Finite(Q),
    Infinity,
}

impl P1Point {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            P1Point::Finite(x) => Some(x),
            P1Point::Infinity => None,
        }
    }

    /// Weil height log max(|a|, |b|) of a/b in lowest terms.
    pub fn height(&self) -> f64 {
        match self {
            P1Point::Infinity => 0.0,
            P1Point::Finite(x) if x.is_zero() => 0.0,
            P1Point::Finite(x) => ln_bigint(x.numer()).max(ln_bigint(x.denom())),
        }
    }

    pub fn bits(&self) -> u64 {
        match self {
            P1Point::Infinity => 1,
            P1Point::Finite(x) => bits(x),
        }
    }

    /// Homogeneous coordinates (x, 1) or (1, 0).
    pub fn lift(&self) -> [Q; 2] {
        match self {
            P1Point::Finite(x) => [x.clone(), Q::one()],
            P1Point::Infinity => [Q::one(), Q::zero()],
        }
    }
}

impl From<Q> for P1Point {
    fn from(x: Q) -> Self {
        P1Point::Finite(x)
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(x) => write!(f, "{}", crate::rational::fmt_q(x)),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

/// Explicit constants with -c_minus <= h(f(x)) - d h(x) <= c_plus.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightBoundC {
    pub c_plus: f64,
    pub c_minus: f64,
    /// log C_inf and log C'_inf of the primitive integer lift.
    pub arch: LogBounds,
    /// e_p with ||F(X)||_p >= p^-e_p ||X||_p^d (only primes with e_p > 0).
    pub finite_lower: BTreeMap<u64, i64>,
    /// max |h(f(x)) - d h(x)| over the construction-time sample.
    pub empirical_max: f64,
}

impl HeightBoundC {
    pub fn constant(&self) -> f64 {
        self.c_plus.max(self.c_minus)
    }
}

/// f = num / den with coprime numerator and denominator; den is monic.
#[derive(Debug, Clone)]
pub struct RationalMapP1 {
    num: QPoly,
    den: QPoly,
    d: usize,
    bound: OnceLock<HeightBoundC>,
}

impl PartialEq for RationalMapP1 {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }
}

impl RationalMapP1 {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("denominator is zero".into()));
        }
        if num.is_zero() {
            return Err(Error::InvalidInput("map is constant".into()));
        }
        if num.gcd(&den).degree() > 0 {
            return Err(Error::InvalidInput("numerator and denominator share a factor".into()));
        }
        let l = den.lc();
        let (num, den) = (num.scale(&l.recip()), den.scale(&l.recip()));
        let d = num.degree().max(den.degree());
        if d == 0 {
            return Err(Error::InvalidInput("map is constant".into()));
        }
        Ok(RationalMapP1 { num, den, d, bound: OnceLock::new() })
    }

    pub fn polynomial(f: QPoly) -> Result<Self> {
        Self::new(f, QPoly::one())
    }

    pub fn identity() -> Self {
        Self::polynomial(QPoly::x()).unwrap()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn as_polynomial(&self) -> Option<&QPoly> {
        (self.den.degree() == 0).then_some(&self.num)
    }

    pub fn eval(&self, x: &P1Point) -> P1Point {
        match x {
            P1Point::Finite(x) => {
                let b = self.den.eval(x);
                if b.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Finite(self.num.eval(x) / b)
                }
            }
            P1Point::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                match dn.cmp(&dd) {
                    std::cmp::Ordering::Greater => P1Point::Infinity,
                    std::cmp::Ordering::Equal => P1Point::Finite(self.num.lc() / self.den.lc()),
                    std::cmp::Ordering::Less => P1Point::Finite(Q::zero()),
                }
            }
        }
    }

    /// Complex evaluation; None for the point at infinity.
    pub fn eval_c(&self, z: Complex64) -> Option<Complex64> {
        let b = self.den.eval_c(z);
        (b.norm() > 0.0).then(|| self.num.eval_c(z) / b)
    }

    /// self o g.
    pub fn compose(&self, g: &RationalMapP1) -> RationalMapP1 {
        let homog = |p: &QPoly| {
            let mut acc = QPoly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                let t = &g.num.pow(i as u32) * &g.den.pow((self.d - i) as u32);
                acc = &acc + &t.scale(c);
            }
            acc
        };
        let (n, d) = (homog(&self.num), homog(&self.den));
        let gg = n.gcd(&d);
        let (n, d) = if gg.degree() > 0 { (n.div_exact(&gg).unwrap(), d.div_exact(&gg).unwrap()) } else { (n, d) };
        RationalMapP1::new(n, d).expect("composition of nonconstant maps")
    }

    pub fn iterate(&self, n: usize) -> RationalMapP1 {
        let mut acc = RationalMapP1::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Forms (F0, F1) with f = F0(x, 1) / F1(x, 1), scaled to primitive
    /// integer coefficients.
    pub fn lift(&self) -> HomogMap {
        let d = self.d as u32;
        let form = |p: &QPoly| -> Vec<(Vec<u32>, Q)> {
            p.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32, d - i as u32], c.clone())).collect()
        };
        HomogMap::new(2, d, vec![form(&self.num), form(&self.den)]).primitive_integer().0
    }

    fn lift_polys(&self) -> (QPoly, QPoly) {
        let l = self.lift();
        let to_poly = |f: &[(Vec<u32>, Q)]| {
            let mut c = vec![Q::zero(); self.d + 1];
            for (m, a) in f {
                c[m[0] as usize] = a.clone();
            }
            QPoly::new(c)
        };
        (to_poly(&l.forms()[0]), to_poly(&l.forms()[1]))
    }

    /// Resultant of the primitive integer lift as a pair of degree-d forms
    /// (up to sign).
    pub fn homogeneous_resultant(&self) -> Q {
        let (a, b) = self.lift_polys();
        if a.degree() == self.d {
            resultant(&a, &b) * num_traits::pow(a.lc(), self.d - b.degree())
        } else {
            resultant(&b, &a) * num_traits::pow(b.lc(), self.d - a.degree())
        }
    }

    /// Primes of bad reduction: primes of the lift resultant and of the
    /// coefficient denominators.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out: BTreeSet<u64> = primes_of(self.homogeneous_resultant().numer()).into_iter().collect();
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            out.extend(primes_of(c.denom()));
        }
        out.into_iter().collect()
    }

    pub fn height_bound(&self) -> Result<&HeightBoundC> {
        if self.d < 2 {
            return Err(Error::DegreeOne);
        }
        Ok(self.bound.get_or_init(|| self.compute_height_bound()))
    }

    fn compute_height_bound(&self) -> HeightBoundC {
        let lift = self.lift();
        let c_inf = lift.abs_sums().into_iter().fold(0.0, f64::max);
        let (f0, f1) = self.lift_polys();
        let d = self.d;
        let rev = |p: &QPoly| {
            let mut c = p.coeffs().to_vec();
            c.resize(d + 1, Q::zero());
            c.reverse();
            QPoly::new(c)
        };
        let mut a_inf = 0.0f64;
        let mut finite_lower: BTreeMap<u64, i64> = BTreeMap::new();
        for (g0, g1) in [(f0.clone(), f1.clone()), (rev(&f0), rev(&f1))] {
            let (g, s, t) = g0.xgcd(&g1);
            debug_assert_eq!(g.degree(), 0);
            let (s, t) = (s.scale(&g.coeff(0).recip()), t.scale(&g.coeff(0).recip()));
            let coeffs: Vec<&Q> = s.coeffs().iter().chain(t.coeffs()).collect();
            a_inf = a_inf.max(coeffs.iter().map(|c| crate::rational::to_f64(c).abs()).sum());
            for c in coeffs {
                for p in primes_of(c.denom()) {
                    let e = -val(c, p).unwrap();
                    let slot = finite_lower.entry(p).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
        }
        let arch = LogBounds { upper: c_inf.ln().max(0.0), lower: (-a_inf.ln()).min(0.0) };
        let c_plus = arch.upper;
        let c_minus = -arch.lower + finite_lower.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).sum::<f64>();
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e1);
        let mut empirical_max = 0.0f64;
        for _ in 0..1000 {
            let x = P1Point::Finite(Q::new(BigInt::from(rng.gen_range(-65536i64..=65536)), BigInt::from(rng.gen_range(1i64..=65536))));
            let diff = self.eval(&x).height() - d as f64 * x.height();
            empirical_max = empirical_max.max(diff.abs());
        }
        debug_assert!(empirical_max <= c_plus.max(c_minus) + 1e-9);
        HeightBoundC { c_plus, c_minus, arch, finite_lower, empirical_max }
    }

    /// log C and log C' at a finite place, as exponents of p.
    fn padic_exponents(&self, p: u64) -> Result<(i64, i64)> {
        Ok((0, self.height_bound()?.finite_lower.get(&p).copied().unwrap_or(0)))
    }
}

impl fmt::Display for RationalMapP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Preperiodicity verdict with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreperiodicCert {
    pub preperiodic: bool,
    /// Orbit index of the first point on the cycle.
    pub tail: usize,
    pub cycle: usize,
    /// Orbit points examined.
    pub steps: usize,
}

impl PreperiodicCert {
    pub(crate) fn escaped(steps: usize) -> Self {
        PreperiodicCert { preperiodic: false, tail: 0, cycle: 0, steps }
    }
}

/// Bit budget for exact orbit points.
pub const ORBIT_BIT_CAP: u64 = 1 << 20;

/// Exact orbit search. Stops with `false` once an orbit point has height
/// above C/(d - 1) + 1, which forces a positive canonical height.
pub fn is_preperiodic_p1(f: &RationalMapP1, x: &P1Point) -> Result<PreperiodicCert> {
    let b = f.height_bound()?;
    let cutoff = b.constant() / (f.d as f64 - 1.0) + 1.0;
    let mut seen: HashMap<P1Point, usize> = HashMap::new();
    let mut y = x.clone();
    for k in 0.. {
        if let Some(&j) = seen.get(&y) {
            return Ok(PreperiodicCert { preperiodic: true, tail: j, cycle: k - j, steps: k });
        }
        if y.height() > cutoff {
            return Ok(PreperiodicCert::escaped(k));
        }
        if y.bits() > ORBIT_BIT_CAP {
            return Err(Error::PrecisionExhausted(format!("orbit point exceeded {ORBIT_BIT_CAP} bits")));
        }
        let next = f.eval(&y);
        seen.insert(std::mem::replace(&mut y, next), k);
    }
    unreachable!()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")))
    }
}

/// Canonical height as the sum over places of the local Green functions of
/// the primitive integer lift at (x, 1). Preperiodic points return an exact 0.
pub fn canonical_height_p1(f: &RationalMapP1, x: &P1Point, tol: f64) -> Result<HeightValue> {
    check_tol(tol)?;
    let bound = f.height_bound()?.clone();
    if is_preperiodic_p1(f, x)?.preperiodic {
        return Ok(HeightValue::zero());
    }
    let lift = f.lift();
    let xs = x.lift();
    let bad = f.bad_primes();
    let tol_v = tol / (bad.len() + 1) as f64;
    let (ln, y) = normalize_q(&xs);
    let g = green_arch(&lift, ln, &y, bound.arch, tol_v);
    let mut h = HeightValue::archimedean_only(g.value, g.rounding);
    h.truncation_error += g.truncation;
    for &p in &bad {
        let (u, e) = f.padic_exponents(p)?;
        let gp = green_padic(&lift, &xs, p, u, e, tol_v)?;
        h.add_finite(p, gp.exponent);
        h.truncation_error += gp.truncation;
    }
    // Good primes: log+ |x|_p.
    if let P1Point::Finite(x) = x {
        if !x.denom().is_one() {
            for (b, e) in factor_biguint(x.denom().magnitude()).factors {
                let is_bad = bad.iter().any(|&p| b == p.into());
                if !is_bad {
                    h.add_finite_big(b, Q::from_integer(e.into()));
                }
            }
        }
    }
    Ok(h)
}

/// Local Green function G_v(x, 1) of the normalized lift, without the
/// preperiodic shortcut. Good primes give log+ |x|_p exactly.
pub fn green_p1(f: &RationalMapP1, x: &P1Point, v: Place, tol: f64) -> Result<LocalGreen> {
    check_tol(tol)?;
    let bound = f.height_bound()?.clone();
    let lift = f.lift();
    let xs = x.lift();
    match v {
        Place::Archimedean => {
            let (ln, y) = normalize_q(&xs);
            let g = green_arch(&lift, ln, &y, bound.arch, tol);
            Ok(LocalGreen::numeric(g.value, g.rounding, g.truncation))
        }
        Place::Finite(p) if f.bad_primes().contains(&p) => {
            let (u, e) = f.padic_exponents(p)?;
            let g = green_padic(&lift, &xs, p, u, e, tol)?;
            Ok(LocalGreen::log_p(p, g.exponent, g.truncation))
        }
        Place::Finite(p) => {
            let m = xs.iter().filter_map(|c| val(c, p)).min().unwrap_or(0);
            Ok(LocalGreen::log_p(p, Q::from_integer(BigInt::from(-m)), 0.0))
        }
    }
}

/// A point of P^1 over the number field Q[t]/(r): Some(element) or infinity.
type KPoint = Option<QPoly>;

fn eval_k(f: &RationalMapP1, r: &QPoly, x: &KPoint) -> KPoint {
    match x {
        None => match f.eval(&P1Point::Infinity) {
            P1Point::Finite(c) => Some(QPoly::constant(c)),
            P1Point::Infinity => None,
        },
        Some(b) => {
            let den = f.den.compose(b).rem(r);
            if den.is_zero() {
                return None;
            }
            let num = f.num.compose(b).rem(r);
            Some((&num * &den.inverse_mod(r).expect("field element")).rem(r))
        }
    }
}

fn k_height(pt: &AlgebraicPoint, x: &KPoint) -> Result<f64> {
    match x {
        None => Ok(0.0),
        Some(b) => {
            let q = AlgebraicPoint::new(pt.field(), vec![b.clone()])?;
            // The archimedean part alone is a lower bound; only compute the
            // finite part when it is needed.
            let h = crate::heights::weil_height_point(&q)?;
            Ok(h.total() - h.error_bound())
        }
    }
}

/// Exact orbit search in Q(alpha).
pub fn is_preperiodic_p1_algebraic(f: &RationalMapP1, alpha: &AlgebraicNumber) -> Result<PreperiodicCert> {
    if let Some(x) = alpha.as_rational() {
        return is_preperiodic_p1(f, &P1Point::Finite(x));
    }
    let b = f.height_bound()?;
    let cutoff = b.constant() / (f.d as f64 - 1.0) + 1.0;
    let pt = alpha.to_point();
    let r = pt.field().clone();
    let mut seen: HashMap<Option<Vec<Q>>, usize> = HashMap::new();
    let mut y: KPoint = Some(QPoly::x());
    for k in 0.. {
        let key = y.as_ref().map(|p| p.coeffs().to_vec());
        if let Some(&j) = seen.get(&key) {
            return Ok(PreperiodicCert { preperiodic: true, tail: j, cycle: k - j, steps: k });
        }
        if k_height(&pt, &y)? > cutoff {
            return Ok(PreperiodicCert::escaped(k));
        }
        if y.as_ref().map_or(0, |p| p.coeffs().iter().map(bits).sum::<u64>()) > ORBIT_BIT_CAP {
            return Err(Error::PrecisionExhausted(format!("orbit point exceeded {ORBIT_BIT_CAP} bits")));
        }
        seen.insert(key, k);
        y = eval_k(f, &r, &y);
    }
    unreachable!()
}

/// Canonical height of an algebraic number, averaged over its conjugates.
/// Places of bad reduction are only supported for rational points.
pub fn canonical_height_p1_algebraic(f: &RationalMapP1, alpha: &AlgebraicNumber, tol: f64) -> Result<HeightValue> {
    if let Some(x) = alpha.as_rational() {
        return canonical_height_p1(f, &P1Point::Finite(x), tol);
    }
    check_tol(tol)?;
    let bound = f.height_bound()?.clone();
    if is_preperiodic_p1_algebraic(f, alpha)?.preperiodic {
        return Ok(HeightValue::zero());
    }
    if !f.bad_primes().is_empty() {
        return Err(Error::Unsupported("canonical heights of algebraic points at places of bad reduction".into()));
    }
    let lift = f.lift();
    let n = alpha.degree() as f64;
    let (mut value, mut rounding, mut trunc) = (0.0, 0.0, 0.0f64);
    for root in alpha.conjugates() {
        let z = root.center;
        let m = z.norm().max(1.0);
        let y = [z / m, Complex64::new(1.0 / m, 0.0)];
        let g = green_arch(&lift, m.ln(), &y, bound.arch, tol);
        let (_, perturb) = log_plus_c(z, root.radius);
        value += g.value;
        rounding += g.rounding + perturb * f.d as f64;
        trunc = trunc.max(g.truncation);
    }
    let mut h = HeightValue::archimedean_only(value / n, rounding / n);
    h.truncation_error = trunc;
    for (b, e) in alpha.to_point().finite_log_plus()? {
        h.add_finite_big(b, e);
    }
    Ok(h)
}

/// F = (f_1, ..., f_n) acting coordinatewise, all f_i of one degree d.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitEndo {
    components: Vec<RationalMapP1>,
    sigma: Option<Vec<usize>>,
}

impl SplitEndo {
    pub fn new(components: Vec<RationalMapP1>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("split endomorphism needs a component".into()));
        };
        let d = first.degree();
        if components.iter().any(|c| c.degree() != d) {
            return Err(Error::InvalidInput("components must share one degree".into()));
        }
        Ok(SplitEndo { components, sigma: None })
    }

    /// Coordinate permutation applied after the components: R(x)_i = f_i(x_sigma(i)).
    pub fn with_permutation(mut self, sigma: Vec<usize>) -> Result<Self> {
        let mut s = sigma.clone();
        s.sort_unstable();
        if s != (0..self.components.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidInput("sigma is not a permutation".into()));
        }
        self.sigma = Some(sigma);
        Ok(self)
    }

    pub fn components(&self) -> &[RationalMapP1] {
        &self.components
    }

    pub fn sigma(&self) -> Option<&[usize]> {
        self.sigma.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn eval(&self, x: &[P1Point]) -> Vec<P1Point> {
        let n = self.components.len();
        (0..n)
            .map(|i| {
                let j = self.sigma.as_ref().map_or(i, |s| s[i]);
                self.components[i].eval(&x[j])
            })
            .collect()
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.components.iter().flat_map(|c| c.bad_primes()).collect();
        set.into_iter().collect()
    }
}

/// Sum of the component canonical heights, each computed to tol / n.
pub fn split_height(f: &SplitEndo, x: &[P1Point], tol: f64) -> Result<HeightValue> {
    if x.len() != f.components.len() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, map has {}", x.len(), f.components.len())));
    }
    let t = tol / x.len() as f64;
    let mut h = HeightValue::zero();
    for (c, xi) in f.components.iter().zip(x) {
        h = h.add(&canonical_height_p1(c, xi, t)?);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn poly(c: &[i64]) -> RationalMapP1 {
        RationalMapP1::polynomial(QPoly::from_ints(c)).unwrap()
    }

    fn fin(x: Q) -> P1Point {
        P1Point::Finite(x)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(poly(&[0, 0, 1]).eval(&fin(qi(3))), fin(qi(9)));
        assert_eq!(poly(&[-2, 0, 1]).eval(&P1Point::Infinity), P1Point::Infinity);
        let f = RationalMapP1::new(QPoly::from_ints(&[1, 0, 1]), QPoly::x()).unwrap();
        assert_eq!(f.eval(&fin(qi(0))), P1Point::Infinity);
    }

    #[test]
    fn height_bounds() {
        let b = poly(&[0, 0, 1]).height_bound().unwrap().clone();
        assert_eq!(b.constant(), 0.0);
        let b = poly(&[-1, 0, 1]).height_bound().unwrap().clone();
        assert!((b.constant() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(poly(&[0, 1]).height_bound().unwrap_err(), Error::DegreeOne);
        let f = RationalMapP1::polynomial(QPoly::new(vec![q(-29, 16), qi(0), qi(1)])).unwrap();
        let b = f.height_bound().unwrap();
        assert!(b.constant() >= 16f64.ln());
        assert_eq!(f.bad_primes(), vec![2]);
    }

    #[test]
    fn preperiodic_examples() {
        let c = is_preperiodic_p1(&poly(&[-1, 0, 1]), &fin(qi(0))).unwrap();
        assert_eq!((c.preperiodic, c.tail, c.cycle), (true, 0, 2));
        assert!(!is_preperiodic_p1(&poly(&[0, 0, 1]), &fin(qi(2))).unwrap().preperiodic);
        let f = RationalMapP1::polynomial(QPoly::new(vec![q(-29, 16), qi(0), qi(1)])).unwrap();
        let c = is_preperiodic_p1(&f, &fin(q(1, 4))).unwrap();
        assert_eq!((c.preperiodic, c.tail, c.cycle), (true, 1, 3));
    }

    #[test]
    fn canonical_height_examples() {
        let h = canonical_height_p1(&poly(&[0, 0, 1]), &fin(qi(2)), 1e-9).unwrap();
        assert!((h.total() - 2f64.ln()).abs() < 1e-12);
        assert!(canonical_height_p1(&poly(&[-1, 0, 1]), &fin(qi(0)), 1e-9).unwrap().is_exact_zero());
        let h = canonical_height_p1(&poly(&[-2, 0, 1]), &fin(qi(3)), 1e-9).unwrap();
        let u = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((h.total() - u.ln()).abs() < 1e-8);
    }

    #[test]
    fn bad_prime_height_is_exact_sum() {
        // x^2 - 1/2 at x = 1/3: finite parts at 2 (bad) and 3 (good).
        let f = RationalMapP1::polynomial(QPoly::new(vec![q(-1, 2), qi(0), qi(1)])).unwrap();
        let x = fin(q(1, 3));
        let h = canonical_height_p1(&f, &x, 1e-10).unwrap();
        let h1 = canonical_height_p1(&f, &f.eval(&x), 1e-10).unwrap();
        assert!((h1.total() - 2.0 * h.total()).abs() < 1e-8);
        assert_eq!(h.finite_exponent(3), qi(1));
    }

    #[test]
    fn split_examples() {
        let f = SplitEndo::new(vec![poly(&[0, 0, 1]), poly(&[0, 0, 1])]).unwrap();
        let h = split_height(&f, &[fin(qi(2)), fin(qi(3))], 1e-9).unwrap();
        assert!((h.total() - 6f64.ln()).abs() < 1e-9);
        let g = SplitEndo::new(vec![poly(&[0, 0, 1]), poly(&[-1, 0, 1])]).unwrap();
        assert!(split_height(&g, &[fin(qi(1)), fin(qi(0))], 1e-9).unwrap().is_exact_zero());
        assert!((split_height(&g, &[fin(qi(2)), fin(qi(0))], 1e-9).unwrap().total() - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn algebraic_height_of_radical() {
        // x^3 - 2 under x^2: canonical height equals the Weil height (log 2)/3.
        let a = AlgebraicNumber::new(&QPoly::from_ints(&[-2, 0, 0, 1]), 0).unwrap();
        let h = canonical_height_p1_algebraic(&poly(&[0, 0, 1]), &a, 1e-10).unwrap();
        assert!((h.total() - 2f64.ln() / 3.0).abs() < 1e-9);
        let w = AlgebraicNumber::new(&QPoly::from_ints(&[1, 1, 1]), 0).unwrap();
        assert!(canonical_height_p1_algebraic(&poly(&[0, 0, 1]), &w, 1e-10).unwrap().is_exact_zero());
    }
}
