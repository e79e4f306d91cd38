//! Weil heights of rational and algebraic points, and the mixed exact /
//! numeric `HeightValue` they are reported in.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::intfactor::factor_biguint;
use crate::places::ln_error;
use crate::poly::QPoly;
use crate::rational::{ln_biguint, ln_plus, to_f64, val, Q};
use crate::resultant::resultant_y;
use crate::roots::{complex_roots, RootDisc};
use crate::zfactor::is_irreducible;

/// A logarithmic quantity: a numeric archimedean part plus exact finite
/// parts sum_b e_b log b (bases are primes, or coprime composites when a
/// number could not be factored completely).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HeightValue {
    pub archimedean: f64,
    pub archimedean_error: f64,
    pub finite: BTreeMap<BigUint, Q>,
    pub truncation_error: f64,
}

impl HeightValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn archimedean_only(value: f64, error: f64) -> Self {
        HeightValue { archimedean: value, archimedean_error: error, ..Self::default() }
    }

    pub fn add_finite(&mut self, base: u64, e: Q) {
        self.add_finite_big(BigUint::from(base), e);
    }

    pub fn add_finite_big(&mut self, base: BigUint, e: Q) {
        if e.is_zero() {
            return;
        }
        let slot = self.finite.entry(base.clone()).or_insert_with(Q::zero);
        *slot += e;
        if slot.is_zero() {
            self.finite.remove(&base);
        }
    }

    pub fn finite_total(&self) -> f64 {
        self.finite.iter().map(|(b, e)| to_f64(e) * ln_biguint(b)).sum()
    }

    pub fn total(&self) -> f64 {
        self.archimedean + self.finite_total()
    }

    /// Bound on |total() - true value|.
    pub fn error_bound(&self) -> f64 {
        self.archimedean_error + self.truncation_error + ln_error(self.finite_total()) * self.finite.len() as f64
    }

    /// Exact zero: no numeric part, no error, no finite part.
    pub fn is_exact_zero(&self) -> bool {
        self.archimedean == 0.0 && self.archimedean_error == 0.0 && self.truncation_error == 0.0 && self.finite.is_empty()
    }

    /// Exponent attached to the base p (zero when absent).
    pub fn finite_exponent(&self, p: u64) -> Q {
        self.finite.get(&BigUint::from(p)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &HeightValue) -> HeightValue {
        let mut out = self.clone();
        out.archimedean += o.archimedean;
        out.archimedean_error += o.archimedean_error;
        out.truncation_error += o.truncation_error;
        for (b, e) in &o.finite {
            out.add_finite_big(b.clone(), e.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> HeightValue {
        let f = to_f64(s);
        HeightValue {
            archimedean: self.archimedean * f,
            archimedean_error: self.archimedean_error * f.abs(),
            finite: self.finite.iter().filter(|_| !s.is_zero()).map(|(b, e)| (b.clone(), e * s)).collect(),
            truncation_error: self.truncation_error * f.abs(),
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.total())?;
        if !self.is_exact_zero() {
            write!(f, " (+/- {:.1e})", self.error_bound())?;
        }
        Ok(())
    }
}

fn add_denominator_part(h: &mut HeightValue, n: &BigInt, scale: &Q) {
    if n.magnitude().is_one() {
        return;
    }
    for (b, e) in factor_biguint(n.magnitude()).factors {
        h.add_finite_big(b, Q::from_integer(e.into()) * scale);
    }
}

/// log+ is exactly 0 on the unit disc.
fn ln_plus_error(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        ln_error(a)
    }
}

/// h(x) = sum_v log+ |x|_v.
pub fn weil_height(x: &Q) -> HeightValue {
    let a = ln_plus(x);
    let mut h = HeightValue::archimedean_only(a, ln_plus_error(a));
    add_denominator_part(&mut h, x.denom(), &Q::one());
    h
}

/// sum_v log+ max_i |x_i|_v.
pub fn weil_height_affine(xs: &[Q]) -> HeightValue {
    let a = xs.iter().map(ln_plus).fold(0.0, f64::max);
    let mut h = HeightValue::archimedean_only(a, ln_plus_error(a));
    let mut primes = std::collections::BTreeSet::new();
    for x in xs {
        if !x.denom().is_one() {
            for (b, _) in factor_biguint(x.denom().magnitude()).factors {
                primes.insert(b);
            }
        }
    }
    for b in primes {
        let e = xs.iter().map(|x| denominator_multiplicity(x.denom(), &b)).max().unwrap_or(0);
        h.add_finite_big(b, Q::from_integer(e.into()));
    }
    h
}

fn denominator_multiplicity(d: &BigInt, b: &BigUint) -> u64 {
    let mut n = d.magnitude().clone();
    let mut e = 0;
    while (&n % b).is_zero() {
        n /= b;
        e += 1;
    }
    e
}

/// An algebraic number: primitive integer minimal polynomial plus the
/// index of the root in the canonical (re, im) ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicNumber {
    minpoly: Vec<BigInt>,
    index: usize,
    roots: Vec<RootDisc>,
}

impl AlgebraicNumber {
    pub fn new(minpoly: &QPoly, index: usize) -> Result<Self> {
        if minpoly.degree() == 0 {
            return Err(Error::InvalidInput("minimal polynomial must be nonconstant".into()));
        }
        if !is_irreducible(minpoly) {
            return Err(Error::ReducibleMinimalPolynomial);
        }
        let roots = complex_roots(minpoly)?;
        if index >= roots.len() {
            return Err(Error::InvalidInput(format!("root index {index} out of range")));
        }
        Ok(AlgebraicNumber { minpoly: minpoly.primitive_int(), index, roots })
    }

    pub fn rational(x: &Q) -> Self {
        let p = QPoly::linear(Q::one(), -x.clone());
        let c = to_f64(x);
        AlgebraicNumber {
            minpoly: p.primitive_int(),
            index: 0,
            roots: vec![RootDisc { center: Complex64::new(c, 0.0), radius: 4.0 * f64::EPSILON * c.abs() }],
        }
    }

    pub fn minpoly(&self) -> QPoly {
        QPoly::from_bigints(&self.minpoly)
    }

    /// Integer coefficients, lowest degree first.
    pub fn minpoly_ints(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn approx(&self) -> Complex64 {
        self.roots[self.index].center
    }

    pub fn conjugates(&self) -> &[RootDisc] {
        &self.roots
    }

    pub fn as_rational(&self) -> Option<Q> {
        (self.degree() == 1).then(|| Q::new(-self.minpoly[0].clone(), self.minpoly[1].clone()))
    }

    pub fn to_point(&self) -> AlgebraicPoint {
        AlgebraicPoint { field: self.minpoly().monic(), coords: vec![QPoly::x()], roots: self.roots.clone() }
    }
}

/// log+|z| and a bound on its sensitivity to a perturbation of radius r.
pub(crate) fn log_plus_c(z: Complex64, r: f64) -> (f64, f64) {
    let m = z.norm();
    let v = m.ln().max(0.0);
    let err = if m - r > 1.0 { r / (m - r) } else { (1.0 + m + r).ln() - (1.0f64).max(m).ln() + r };
    (v, err + ln_error(v))
}

/// h(alpha) = (log|a_n| + sum log+|alpha_i|) / n with the finite part
/// log|a_n| split over the primes of a_n.
pub fn height_algebraic(alpha: &AlgebraicNumber) -> Result<HeightValue> {
    let n = alpha.degree();
    let inv = Q::new(BigInt::one(), BigInt::from(n));
    let mut arch = 0.0;
    let mut err = 0.0;
    for r in &alpha.roots {
        let (v, e) = log_plus_c(r.center, r.radius);
        arch += v;
        err += e;
    }
    let mut h = HeightValue::archimedean_only(arch / n as f64, err / n as f64);
    add_denominator_part(&mut h, &alpha.minpoly[n], &inv);
    Ok(h)
}

/// A point whose coordinates lie in the number field Q[t]/(field):
/// coordinate i is coords[i](theta) for each root theta of `field`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicPoint {
    field: QPoly,
    coords: Vec<QPoly>,
    roots: Vec<RootDisc>,
}

impl AlgebraicPoint {
    /// `field` must be irreducible over Q.
    pub fn new(field: &QPoly, coords: Vec<QPoly>) -> Result<Self> {
        if field.degree() == 0 {
            return Err(Error::InvalidInput("field polynomial must be nonconstant".into()));
        }
        let field = field.monic();
        let roots = if field.degree() == 1 {
            let c = to_f64(&-field.coeff(0));
            vec![RootDisc { center: Complex64::new(c, 0.0), radius: 4.0 * f64::EPSILON * c.abs() }]
        } else {
            complex_roots(&field)?
        };
        let coords = coords.iter().map(|c| c.rem(&field)).collect();
        Ok(AlgebraicPoint { field, coords, roots })
    }

    pub fn rational(xs: &[Q]) -> Self {
        AlgebraicPoint::new(&QPoly::x(), xs.iter().map(|x| QPoly::constant(x.clone())).collect()).expect("linear field")
    }

    pub fn field(&self) -> &QPoly {
        &self.field
    }

    pub fn coords(&self) -> &[QPoly] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The coordinates as rationals when the point is rational.
    pub fn as_rational(&self) -> Option<Vec<Q>> {
        self.coords.iter().map(|c| (c.degree() == 0).then(|| c.coeff(0))).collect()
    }

    /// Complex values of every coordinate at every conjugate, with an
    /// error radius per value.
    pub fn conjugate_values(&self) -> Vec<Vec<(Complex64, f64)>> {
        self.roots
            .iter()
            .map(|r| {
                self.coords
                    .iter()
                    .map(|c| {
                        let v = c.eval_c(r.center);
                        let dv = c.derivative().eval_c(r.center).norm();
                        (v, dv * r.radius * 2.0 + 8.0 * f64::EPSILON * v.norm())
                    })
                    .collect()
            })
            .collect()
    }

    /// Characteristic polynomial of coordinate i over Q (degree = field degree).
    pub fn charpoly(&self, i: usize) -> QPoly {
        let f = QPoly2::from_y(&self.field);
        let g = &QPoly2::x() - &QPoly2::from_y(&self.coords[i]);
        resultant_y(&f, &g)
    }

    /// For each prime p: (1/n) sum over conjugates of log+ max_i |x_i|_p,
    /// as an exponent of p. Only available when at every prime at most one
    /// coordinate fails to be integral.
    pub fn finite_log_plus(&self) -> Result<BTreeMap<BigUint, Q>> {
        let n = self.degree();
        let leads: Vec<BigInt> = (0..self.dim()).map(|i| self.charpoly(i).primitive_int().last().unwrap().clone()).collect();
        let mut out: BTreeMap<BigUint, Q> = BTreeMap::new();
        let mut bases = std::collections::BTreeSet::new();
        for a in &leads {
            if !a.magnitude().is_one() {
                for (b, _) in factor_biguint(a.magnitude()).factors {
                    bases.insert(b);
                }
            }
        }
        for b in bases {
            let hits: Vec<u64> = leads.iter().map(|a| denominator_multiplicity(a, &b)).filter(|&e| e > 0).collect();
            if hits.len() > 1 {
                return Err(Error::Unsupported(format!(
                    "two coordinates are non-integral at {b}; joint local heights need p-adic root data"
                )));
            }
            out.insert(b, Q::new(BigInt::from(hits[0]), BigInt::from(n)));
        }
        Ok(out)
    }
}

/// Weil height of an algebraic point, averaged over its conjugates.
pub fn weil_height_point(pt: &AlgebraicPoint) -> Result<HeightValue> {
    let n = pt.degree() as f64;
    let mut arch = 0.0;
    let mut err = 0.0;
    for vals in pt.conjugate_values() {
        let (mut best, mut best_err) = (0.0f64, 0.0f64);
        for (z, r) in vals {
            let (v, e) = log_plus_c(z, r);
            if v > best {
                best = v;
            }
            best_err = best_err.max(e);
        }
        arch += best;
        err += best_err;
    }
    let mut h = HeightValue::archimedean_only(arch / n, err / n);
    for (b, e) in pt.finite_log_plus()? {
        h.add_finite_big(b, e);
    }
    Ok(h)
}

/// Multiplicity of p in a nonzero rational, as used for finite parts.
pub fn finite_log_plus_rational(x: &Q, p: u64) -> i64 {
    match val(x, p) {
        Some(v) if v < 0 => -v,
        _ => 0,
    }
}

/// Exponent of b in a HeightValue-compatible key for a prime.
pub fn prime_key(p: u64) -> BigUint {
    BigUint::from(p)
}
