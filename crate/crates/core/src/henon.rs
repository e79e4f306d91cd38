//! Henon-type automorphisms of the affine plane, f = h_k o ... o h_1 with
//! h_j(x, y) = (y, P_j(y) - delta_j x): exact two-sided iteration, local
//! Green functions G+ and G- with certified tails, the heights built from
//! them, and periodicity detection.
//!
//! Green values use a filtration. Forward: once |y| >= max(|x|, R) the
//! orbit stays in that region and log|y| follows
//!   log|y'| = e log|y| + log|a| + [log(1 - eta), log(1 + eta)],  eta <= A / (|a| |y|),
//! with a = lc(P) and A = sum of the other |coefficients| + |delta|, so the
//! limit is an explicit geometric series plus a tail below -log(1 - eta)/D_n.
//! At a prime the same recurrence holds exactly for valuations. G- is G+ of
//! the inverse, which after swapping coordinates is again of Henon type.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::heights::{weil_height_affine, HeightValue};
use crate::padic::Padic;
use crate::places::{primes_of, LocalGreen, Place};
use crate::poly::QPoly;
use crate::rational::{bits, ln_abs, to_f64, val, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct HenonFactor {
    pub p: QPoly,
    pub delta: Q,
}

impl HenonFactor {
    pub fn new(p: QPoly, delta: Q) -> Result<Self> {
        if p.degree() < 2 {
            return Err(Error::InvalidInput("Henon factor needs deg P >= 2".into()));
        }
        if delta.is_zero() {
            return Err(Error::InvalidInput("Henon factor needs delta != 0".into()));
        }
        Ok(HenonFactor { p, delta })
    }

    pub fn apply(&self, (x, y): (&Q, &Q)) -> (Q, Q) {
        (y.clone(), self.p.eval(y) - &self.delta * x)
    }

    pub fn apply_inverse(&self, (x, y): (&Q, &Q)) -> (Q, Q) {
        ((self.p.eval(x) - y) / &self.delta, x.clone())
    }

    /// Factor of swap o h^-1 o swap: (y, P(y)/delta - x/delta).
    fn swapped_inverse(&self) -> HenonFactor {
        let inv = self.delta.recip();
        HenonFactor { p: self.p.scale(&inv), delta: inv }
    }
}

/// Factors are applied in the order listed: f = h_k o ... o h_1.
#[derive(Debug, Clone, PartialEq)]
pub struct HenonMap {
    factors: Vec<HenonFactor>,
}

/// Default bit budget for exact orbit points.
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 20;

impl HenonMap {
    pub fn new(factors: Vec<HenonFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("Henon map needs at least one factor".into()));
        }
        Ok(HenonMap { factors })
    }

    /// The single factor (y, P(y) - delta x).
    pub fn simple(p: QPoly, delta: Q) -> Result<Self> {
        Self::new(vec![HenonFactor::new(p, delta)?])
    }

    pub fn factors(&self) -> &[HenonFactor] {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|f| f.p.degree() as u64).product()
    }

    /// f o g: the factors of g followed by those of f.
    pub fn compose(&self, g: &HenonMap) -> HenonMap {
        HenonMap { factors: g.factors.iter().chain(&self.factors).cloned().collect() }
    }

    pub fn eval(&self, p: &[Q; 2]) -> [Q; 2] {
        let (mut x, mut y) = (p[0].clone(), p[1].clone());
        for h in &self.factors {
            (x, y) = h.apply((&x, &y));
        }
        [x, y]
    }

    pub fn eval_inverse(&self, p: &[Q; 2]) -> [Q; 2] {
        let (mut x, mut y) = (p[0].clone(), p[1].clone());
        for h in self.factors.iter().rev() {
            (x, y) = h.apply_inverse((&x, &y));
        }
        [x, y]
    }

    /// The inverse conjugated by the coordinate swap; G-(x, y) = G+ of this map at (y, x).
    pub fn swapped_inverse(&self) -> HenonMap {
        HenonMap { factors: self.factors.iter().rev().map(HenonFactor::swapped_inverse).collect() }
    }

    /// The composite as a pair of bivariate polynomials.
    pub fn as_polys(&self) -> (QPoly2, QPoly2) {
        let (mut x, mut y) = (QPoly2::x(), QPoly2::y());
        for h in &self.factors {
            let py = QPoly2::from_y(&h.p).compose(&QPoly2::zero(), &y);
            let ny = &py - &x.scale(&h.delta);
            x = y;
            y = ny;
        }
        (x, y)
    }

    /// Denominators, leading coefficients of the P_j and the delta_j.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out = BTreeSet::new();
        for h in &self.factors {
            for c in h.p.coeffs() {
                out.extend(primes_of(c.denom()));
            }
            out.extend(primes_of(h.p.lc().numer()));
            out.extend(primes_of(h.delta.numer()));
            out.extend(primes_of(h.delta.denom()));
        }
        out.into_iter().collect()
    }

    /// Forward escape radius: beyond it, |y| >= |x| forces |y| to grow.
    fn arch_constants(&self) -> ArchConstants {
        let mut r = 1.0f64;
        let mut eta_ratio = 0.0f64;
        let mut k = 0.0f64;
        for h in &self.factors {
            let e = h.p.degree();
            let a = to_f64(&h.p.lc()).abs();
            let rest: f64 = h.p.coeffs()[..e].iter().map(|c| to_f64(c).abs()).sum::<f64>() + to_f64(&h.delta).abs();
            eta_ratio = eta_ratio.max(rest / a);
            r = r.max(2.0 * rest / a).max((2.0 / a).powf(1.0 / (e as f64 - 1.0)));
            k = k.max((rest + a).max(1.0).ln());
        }
        ArchConstants { radius: r * (1.0 + 1e-12), eta_ratio, growth: k }
    }

    /// Valuation threshold W: v(y) < min(v(x), W) starts p-adic escape.
    fn padic_threshold(&self, p: u64) -> f64 {
        let mut w = f64::INFINITY;
        for h in &self.factors {
            let e = h.p.degree();
            let va = val(&h.p.lc(), p).unwrap() as f64;
            for (i, c) in h.p.coeffs()[..e].iter().enumerate() {
                if let Some(vi) = val(c, p) {
                    w = w.min((vi as f64 - va) / (e - i) as f64);
                }
            }
            let vd = val(&h.delta, p).unwrap() as f64;
            w = w.min((vd - va) / (e as f64 - 1.0)).min(-va / (e as f64 - 1.0));
        }
        w
    }

    fn padic_growth(&self, p: u64) -> i64 {
        self.factors
            .iter()
            .flat_map(|h| h.p.coeffs().iter().chain(std::iter::once(&h.delta)))
            .filter_map(|c| val(c, p))
            .map(|v| -v)
            .max()
            .unwrap_or(0)
            .max(0)
    }

    fn integral_at(&self, p: u64) -> bool {
        self.factors.iter().all(|h| h.p.coeffs().iter().chain(std::iter::once(&h.delta)).all(|c| val(c, p).map_or(true, |v| v >= 0)))
    }

    /// Sum over one factor cycle starting at j0 of c_i * prod_{l > i} e_l,
    /// where c_i is the per-factor constant.
    fn cycle_offset(&self, j0: usize, per_factor: impl Fn(&HenonFactor) -> f64) -> f64 {
        let k = self.factors.len();
        let mut acc = 0.0;
        for i in 0..k {
            let h = &self.factors[(j0 + i) % k];
            acc = acc * h.p.degree() as f64 + per_factor(h);
        }
        acc
    }

    fn cycle_offset_exact(&self, j0: usize, p: u64) -> Q {
        let k = self.factors.len();
        let mut acc = Q::zero();
        for i in 0..k {
            let h = &self.factors[(j0 + i) % k];
            acc = acc * Q::from_integer(BigInt::from(h.p.degree())) + Q::from_integer(BigInt::from(val(&h.p.lc(), p).unwrap()));
        }
        acc
    }
}

struct ArchConstants {
    radius: f64,
    eta_ratio: f64,
    growth: f64,
}

fn check_bits(p: &[Q; 2], budget_bits: u64) -> Result<()> {
    if bits(&p[0]) + bits(&p[1]) > budget_bits {
        Err(Error::CoefficientBlowup { budget_bits })
    } else {
        Ok(())
    }
}

/// f^n(p) for n > 0, f^-|n|(p) for n < 0.
pub fn henon_iterate(h: &HenonMap, p: &[Q; 2], n: i64, budget_bits: u64) -> Result<[Q; 2]> {
    let mut q = p.clone();
    for _ in 0..n.unsigned_abs() {
        q = if n > 0 { h.eval(&q) } else { h.eval_inverse(&q) };
        check_bits(&q, budget_bits)?;
    }
    Ok(q)
}

/// G+ and G- at one place.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenPair {
    pub place: Place,
    pub g_plus: LocalGreen,
    pub g_minus: LocalGreen,
}

impl GreenPair {
    /// G = max(G+, G-).
    pub fn g(&self) -> LocalGreen {
        self.g_plus.max(&self.g_minus)
    }
}

const EXACT_BITS: u64 = 1 << 13;
const MAX_FACTOR_STEPS: usize = 4000;

fn green_plus_arch(h: &HenonMap, p: &[Q; 2], tol: f64) -> Result<LocalGreen> {
    let c = h.arch_constants();
    let k = h.factors.len();
    let d = h.degree() as f64;
    let offset = |j0: usize| h.cycle_offset(j0, |f| to_f64(&f.p.lc()).abs().ln());
    let (mut x, mut y) = (p[0].clone(), p[1].clone());
    let mut big_d = 1.0f64;
    let mut seen = std::collections::HashSet::new();
    let mut n = 0usize;
    // Exact phase.
    loop {
        let j = n % k;
        if j == 0 && !seen.insert((x.clone(), y.clone())) {
            return Ok(LocalGreen::exact_zero(Place::Archimedean));
        }
        let (ly, lx) = (log_abs(&y), log_abs(&x));
        if y.abs() >= x.abs() && ly >= c.radius.ln() {
            let eta = c.eta_ratio * (-ly).exp();
            let tail = -(-eta).ln_1p() / big_d;
            if tail <= tol {
                let value = (ly + offset(j) / (d - 1.0)) / big_d;
                return Ok(LocalGreen::numeric(value, 16.0 * f64::EPSILON * (1.0 + value.abs()), tail));
            }
        } else {
            let bound = (lx.max(ly).max(0.0) + c.growth) / big_d;
            if bound <= tol {
                return Ok(LocalGreen::numeric(0.0, 0.0, bound));
            }
        }
        if bits(&x) + bits(&y) > EXACT_BITS || n >= MAX_FACTOR_STEPS {
            break;
        }
        (x, y) = h.factors[j].apply((&x, &y));
        big_d *= h.factors[j].p.degree() as f64;
        n += 1;
    }
    // Floating phase (reached only for orbits that neither escape nor
    // certify quickly).
    let (mut xf, mut yf) = (to_f64(&x), to_f64(&y));
    let coeffs: Vec<(Vec<f64>, f64)> = h.factors.iter().map(|f| (f.p.to_f64_coeffs(), to_f64(&f.delta))).collect();
    while n < MAX_FACTOR_STEPS {
        let j = n % k;
        let (ly, lx) = (yf.abs().ln(), xf.abs().ln());
        if ly >= lx && ly >= c.radius.ln() {
            let eta = c.eta_ratio * (-ly).exp();
            let tail = -(-eta).ln_1p() / big_d;
            if tail <= tol {
                let value = (ly + offset(j) / (d - 1.0)) / big_d;
                return Ok(LocalGreen::numeric(value, 1e-12 * (1.0 + value.abs()), tail));
            }
        } else {
            let bound = (lx.max(ly).max(0.0) + c.growth) / big_d;
            if bound <= tol {
                return Ok(LocalGreen::numeric(0.0, 0.0, bound));
            }
        }
        let (pc, delta) = &coeffs[j];
        let py = pc.iter().rev().fold(0.0, |acc, a| acc * yf + a);
        (xf, yf) = (yf, py - delta * xf);
        big_d *= (pc.len() - 1) as f64;
        n += 1;
    }
    Err(Error::PrecisionExhausted("archimedean Green function did not converge".into()))
}

fn log_abs(x: &Q) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        ln_abs(x)
    }
}

fn padic_val(z: &Padic) -> f64 {
    z.valuation().map_or(z.precision() as f64, |v| v as f64)
}

fn green_plus_padic(h: &HenonMap, p: &[Q; 2], prime: u64, tol: f64) -> Result<LocalGreen> {
    let integral_point = p.iter().all(|c| val(c, prime).map_or(true, |v| v >= 0));
    if integral_point && h.integral_at(prime) {
        return Ok(LocalGreen::exact_zero(Place::Finite(prime)));
    }
    let w_max = h.padic_threshold(prime);
    let growth = h.padic_growth(prime);
    let lnp = (prime as f64).ln();
    let k = h.factors.len();
    let dq = Q::from_integer(BigInt::from(h.degree()));
    let mut prec = 256i64;
    'retry: loop {
        let coeffs: Vec<(Vec<Padic>, Padic)> = h
            .factors
            .iter()
            .map(|f| {
                (f.p.coeffs().iter().map(|c| Padic::from_q(c, prime, prec + 64)).collect(), Padic::from_q(&f.delta, prime, prec + 64))
            })
            .collect();
        let (mut x, mut y) = (Padic::from_q(&p[0], prime, prec), Padic::from_q(&p[1], prime, prec));
        let mut big_d = BigInt::one();
        for n in 0..MAX_FACTOR_STEPS {
            let j = n % k;
            let (vx, vy) = (padic_val(&x), padic_val(&y));
            if y.valuation().is_some() && vy < vx && vy < w_max {
                let w = Q::from_integer(BigInt::from(y.valuation().unwrap()));
                let c = h.cycle_offset_exact(j, prime);
                let e = -(w + c / (&dq - Q::one())) / Q::from_integer(big_d);
                return Ok(LocalGreen::log_p(prime, e, 0.0));
            }
            let norm = (-vx.min(vy)).max(0.0);
            let bound = (norm + growth as f64) * lnp / big_d.to_f64().unwrap_or(f64::INFINITY);
            if bound <= tol {
                return Ok(LocalGreen::log_p(prime, Q::zero(), bound));
            }
            if x.precision().min(y.precision()) < 32 {
                prec *= 2;
                if prec > 1 << 16 {
                    return Err(Error::PrecisionExhausted(format!("p-adic orbit at {prime} lost precision")));
                }
                continue 'retry;
            }
            let (pc, delta) = &coeffs[j];
            let mut py = Padic::zero(prime, prec + 64);
            for a in pc.iter().rev() {
                py = py.mul(&y).add(a);
            }
            let ny = py.sub(&delta.mul(&x));
            x = y;
            y = ny;
            big_d *= h.factors[j].p.degree();
        }
        return Err(Error::PrecisionExhausted(format!("p-adic Green function at {prime} did not converge")));
    }
}

fn green_plus(h: &HenonMap, p: &[Q; 2], v: Place, tol: f64) -> Result<LocalGreen> {
    match v {
        Place::Archimedean => green_plus_arch(h, p, tol),
        Place::Finite(q) => green_plus_padic(h, p, q, tol),
    }
}

/// G+ and G- at the place v, each to within tol.
pub fn green_henon(h: &HenonMap, p: &[Q; 2], v: Place, tol: f64) -> Result<GreenPair> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let g_plus = green_plus(h, p, v, tol)?;
    let swapped = [p[1].clone(), p[0].clone()];
    let g_minus = green_plus(&h.swapped_inverse(), &swapped, v, tol)?;
    Ok(GreenPair { place: v, g_plus, g_minus })
}

/// Places where G+ or G- can be nonzero for the point p.
pub fn relevant_places(h: &HenonMap, p: &[Q; 2]) -> Vec<Place> {
    let mut primes: BTreeSet<u64> = h.bad_primes().into_iter().collect();
    for c in p {
        primes.extend(primes_of(c.denom()));
    }
    std::iter::once(Place::Archimedean).chain(primes.into_iter().map(Place::Finite)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HenonHeights {
    /// sum_v (G+ + G-)
    pub hhat: HeightValue,
    /// sum_v max(G+, G-)
    pub htilde: HeightValue,
    pub places: Vec<GreenPair>,
}

pub fn canonical_heights_henon(h: &HenonMap, p: &[Q; 2], tol: f64) -> Result<HenonHeights> {
    if is_periodic_henon(h, p)?.periodic {
        return Ok(HenonHeights { hhat: HeightValue::zero(), htilde: HeightValue::zero(), places: Vec::new() });
    }
    let places = relevant_places(h, p);
    let t = tol / (2 * places.len()) as f64;
    let mut hhat = HeightValue::zero();
    let mut htilde = HeightValue::zero();
    let mut pairs = Vec::new();
    for v in places {
        let pair = green_henon(h, p, v, t)?;
        hhat = hhat.add(&pair.g_plus.to_height()).add(&pair.g_minus.to_height());
        htilde = htilde.add(&pair.g().to_height());
        pairs.push(pair);
    }
    Ok(HenonHeights { hhat, htilde, places: pairs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCert {
    pub periodic: bool,
    pub period: usize,
    pub steps: usize,
}

/// Upper bound on the Weil height of any point with bounded two-sided orbit:
/// outside the filtration radii one of the two directions escapes.
pub fn periodic_height_bound(h: &HenonMap) -> f64 {
    let inv = h.swapped_inverse();
    let mut b = h.arch_constants().radius.max(inv.arch_constants().radius).ln();
    for p in h.bad_primes() {
        let w = h.padic_threshold(p).min(inv.padic_threshold(p));
        // Valuations are integers: bounded points satisfy min v >= ceil(w).
        let t = (-(w.ceil())).max(0.0);
        b += t * (p as f64).ln();
    }
    b
}

/// Exact forward orbit search. Since f is injective, a bounded forward
/// orbit returns to p; points of height above the filtration bound escape.
pub fn is_periodic_henon(h: &HenonMap, p: &[Q; 2]) -> Result<PeriodicCert> {
    let bound = periodic_height_bound(h) + 1e-9;
    let mut q = p.clone();
    for k in 0.. {
        if weil_height_affine(&q).total() > bound {
            return Ok(PeriodicCert { periodic: false, period: 0, steps: k });
        }
        q = h.eval(&q);
        check_bits(&q, DEFAULT_BUDGET_BITS)?;
        if q == *p {
            return Ok(PeriodicCert { periodic: true, period: k + 1, steps: k + 1 });
        }
    }
    unreachable!()
}

/// Membership in the two-sided filled Julia set at one place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JuliaVerdict {
    Bounded,
    /// Escapes forward (positive) or backward (negative) after |n| factor cycles.
    Escaped(i64),
    Undecided(usize),
}

/// Exact two-sided test: Bounded on a detected cycle, Escaped once an
/// iterate enters an escape region.
pub fn julia_verdict(h: &HenonMap, p: &[Q; 2], v: Place, max_iter: usize) -> JuliaVerdict {
    let inv = h.swapped_inverse();
    let escapes = |m: &HenonMap, q: &[Q; 2]| -> bool {
        match v {
            Place::Archimedean => q[1].abs() >= q[0].abs() && log_abs(&q[1]) >= m.arch_constants().radius.ln(),
            Place::Finite(pr) => {
                let w = m.padic_threshold(pr);
                match (val(&q[1], pr), val(&q[0], pr)) {
                    (Some(vy), Some(vx)) => (vy as f64) < w && vy < vx,
                    (Some(vy), None) => (vy as f64) < w,
                    _ => false,
                }
            }
        }
    };
    let (mut fwd, mut bwd) = (p.clone(), [p[1].clone(), p[0].clone()]);
    for n in 0..max_iter {
        if escapes(h, &fwd) {
            return JuliaVerdict::Escaped(n as i64);
        }
        if escapes(&inv, &bwd) {
            return JuliaVerdict::Escaped(-(n as i64));
        }
        fwd = h.eval(&fwd);
        bwd = inv.eval(&bwd);
        if fwd == *p {
            return JuliaVerdict::Bounded;
        }
        if bits(&fwd[0]) + bits(&fwd[1]) > DEFAULT_BUDGET_BITS {
            return JuliaVerdict::Undecided(n);
        }
    }
    JuliaVerdict::Undecided(max_iter)
}
