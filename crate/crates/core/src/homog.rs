//! Homogeneous polynomial maps F: K^n -> K^n of degree d and their local
//! Green functions G_v(X) = lim d^-k log ||F^k(X)||_v.
//!
//! Both engines use the telescoping form
//!   G(X) = log||X|| + sum_k d^-(k+1) log||F(Y_k)||,  Y_{k+1} = F(Y_k)/||F(Y_k)||,
//! whose summands lie in [log C', log C] whenever C' ||Y||^d <= ||F(Y)|| <= C ||Y||^d.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::Padic;
use crate::rational::{ln_abs, pow_q, to_f64, val, Q};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct HomogMap {
    nvars: usize,
    d: u32,
    forms: Vec<Vec<(Monomial, Q)>>,
}

impl HomogMap {
    pub fn new(nvars: usize, d: u32, forms: Vec<Vec<(Monomial, Q)>>) -> Self {
        let forms: Vec<Vec<(Monomial, Q)>> =
            forms.into_iter().map(|f| f.into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect();
        debug_assert!(forms.iter().flatten().all(|(m, _)| m.len() == nvars && m.iter().sum::<u32>() == d));
        HomogMap { nvars, d, forms }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn forms(&self) -> &[Vec<(Monomial, Q)>] {
        &self.forms
    }

    /// lambda * F with integer coefficients of gcd 1, and lambda.
    pub fn primitive_integer(&self) -> (HomogMap, Q) {
        let coeffs = || self.forms.iter().flatten().map(|(_, c)| c);
        let l = coeffs().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let g = coeffs().fold(BigInt::zero(), |a, c| a.gcd(&(c.numer() * (&l / c.denom()))));
        let lambda = if g.is_zero() { Q::one() } else { Q::new(l, g) };
        let forms = self.forms.iter().map(|f| f.iter().map(|(m, c)| (m.clone(), c * &lambda)).collect()).collect();
        (HomogMap { nvars: self.nvars, d: self.d, forms }, lambda)
    }

    pub fn eval_q(&self, x: &[Q]) -> Vec<Q> {
        let pows: Vec<Vec<Q>> = x.iter().map(|xi| powers(xi, self.d)).collect();
        self.forms
            .iter()
            .map(|f| {
                f.iter().fold(Q::zero(), |acc, (m, c)| {
                    let mut t = c.clone();
                    for (i, &e) in m.iter().enumerate() {
                        t *= &pows[i][e as usize];
                    }
                    acc + t
                })
            })
            .collect()
    }

    /// Values and an absolute rounding bound valid for ||x|| <= 1.
    pub fn eval_c(&self, x: &[Complex64]) -> (Vec<Complex64>, f64) {
        let pows: Vec<Vec<Complex64>> = x
            .iter()
            .map(|&xi| {
                let mut v = vec![Complex64::new(1.0, 0.0)];
                for _ in 0..self.d {
                    let last = *v.last().unwrap();
                    v.push(last * xi);
                }
                v
            })
            .collect();
        let mut err = 0.0f64;
        let vals = self
            .forms
            .iter()
            .map(|f| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for (m, c) in f {
                    let cf = to_f64(c);
                    let mut t = Complex64::new(cf, 0.0);
                    for (i, &e) in m.iter().enumerate() {
                        t *= pows[i][e as usize];
                    }
                    mag += t.norm();
                    acc += t;
                }
                err = err.max(4.0 * f64::EPSILON * (f.len() as f64 + self.d as f64 + 2.0) * mag);
                acc
            })
            .collect();
        (vals, err)
    }

    fn eval_padic(&self, x: &[Padic], coeffs: &[Vec<Padic>]) -> Vec<Padic> {
        let p = x[0].p();
        let prec = x.iter().map(Padic::precision).min().unwrap();
        let pows: Vec<Vec<Padic>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![Padic::from_q(&Q::one(), p, prec + 64)];
                for _ in 0..self.d {
                    let last = v.last().unwrap().mul(xi);
                    v.push(last);
                }
                v
            })
            .collect();
        self.forms
            .iter()
            .zip(coeffs)
            .map(|(f, cs)| {
                let mut acc = Padic::zero(p, prec + 64);
                for ((m, _), c) in f.iter().zip(cs) {
                    let mut t = c.clone();
                    for (i, &e) in m.iter().enumerate() {
                        t = t.mul(&pows[i][e as usize]);
                    }
                    acc = acc.add(&t);
                }
                acc
            })
            .collect()
    }

    /// Sum of |coefficients| of each form.
    pub fn abs_sums(&self) -> Vec<f64> {
        self.forms.iter().map(|f| f.iter().map(|(_, c)| to_f64(c).abs()).sum()).collect()
    }

    /// max(0, -min v_p(coefficient)): log C_p <= u log p.
    pub fn neg_val(&self, p: u64) -> i64 {
        self.forms.iter().flatten().filter_map(|(_, c)| val(c, p)).map(|v| -v).max().unwrap_or(0).max(0)
    }

    /// F o G for maps on the same number of variables.
    pub fn compose(&self, g: &HomogMap) -> HomogMap {
        let d = self.d * g.d;
        let gp: Vec<Vec<Poly>> = g.forms.iter().map(|f| powers_poly(f, self.d, self.nvars)).collect();
        let forms = self
            .forms
            .iter()
            .map(|f| {
                let mut acc: Poly = Vec::new();
                for (m, c) in f {
                    let mut t: Poly = vec![(vec![0; self.nvars], c.clone())];
                    for (i, &e) in m.iter().enumerate() {
                        t = poly_mul(&t, &gp[i][e as usize]);
                    }
                    acc.extend(t);
                }
                normalize_poly(acc)
            })
            .collect();
        HomogMap::new(self.nvars, d, forms)
    }
}

type Poly = Vec<(Monomial, Q)>;

fn normalize_poly(mut p: Poly) -> Poly {
    p.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Poly = Vec::with_capacity(p.len());
    for (m, c) in p {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ma, ca) in a {
        for (mb, cb) in b {
            out.push((ma.iter().zip(mb).map(|(x, y)| x + y).collect(), ca * cb));
        }
    }
    normalize_poly(out)
}

fn powers_poly(f: &[(Monomial, Q)], d: u32, n: usize) -> Vec<Poly> {
    let f = f.to_vec();
    let mut v = vec![vec![(vec![0; n], Q::one())]];
    for _ in 0..d {
        let next = poly_mul(v.last().unwrap(), &f);
        v.push(next);
    }
    v
}

fn powers(x: &Q, d: u32) -> Vec<Q> {
    let mut v = vec![Q::one()];
    for _ in 0..d {
        let next = v.last().unwrap() * x;
        v.push(next);
    }
    v
}

/// Bounds log C' <= log(||F(Y)|| / ||Y||^d) <= log C at one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBounds {
    pub upper: f64,
    pub lower: f64,
}

impl LogBounds {
    pub fn spread(&self) -> f64 {
        self.upper.max(-self.lower).max(0.0)
    }
}

/// Smallest N with spread * d^-N / (d - 1) <= tol.
pub fn steps_for(d: u32, spread: f64, tol: f64) -> usize {
    if spread <= 0.0 {
        return 0;
    }
    let d = d as f64;
    let n = ((spread / ((d - 1.0) * tol)).ln() / d.ln()).ceil();
    n.max(0.0) as usize
}

/// A truncated archimedean Green value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchGreen {
    pub value: f64,
    pub rounding: f64,
    pub truncation: f64,
    pub steps: usize,
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Rational X split as ||X|| (log, exact up to rounding) and X / ||X||.
pub fn normalize_q(x: &[Q]) -> (f64, Vec<Complex64>) {
    let big = x.iter().max_by(|a, b| a.abs().cmp(&b.abs())).cloned().unwrap_or_else(Q::zero);
    if big.is_zero() {
        return (f64::NEG_INFINITY, vec![Complex64::new(0.0, 0.0); x.len()]);
    }
    let m = big.abs();
    (ln_abs(&m), x.iter().map(|xi| Complex64::new(to_f64(&(xi / &m)), 0.0)).collect())
}

/// Archimedean Green value at a point given as (log||X||, X/||X||).
pub fn green_arch(f: &HomogMap, log_norm: f64, y0: &[Complex64], bounds: LogBounds, tol: f64) -> ArchGreen {
    let n = steps_for(f.d, bounds.spread(), tol);
    let d = f.d as f64;
    let mut value = log_norm;
    let mut rounding = 8.0 * f64::EPSILON * (1.0 + log_norm.abs());
    let mut y = y0.to_vec();
    let mut w = 1.0;
    for _ in 0..n {
        w /= d;
        let (fy, err) = f.eval_c(&y);
        let norm = sup_norm(&fy);
        // Clamp into the certified window: rounding cannot push the true
        // ratio outside [C', C].
        let l = norm.ln().clamp(bounds.lower, bounds.upper);
        value += w * l;
        let rel = if norm > err { err / (norm - err) } else { 1.0 };
        rounding += w * (2.0 * rel + 4.0 * f64::EPSILON * (1.0 + l.abs()));
        y = fy.iter().map(|z| z / norm).collect();
    }
    ArchGreen { value, rounding, truncation: bounds.spread() * w / (d - 1.0), steps: n }
}

/// A truncated p-adic Green value: exponent * log p, exact partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicGreen {
    pub exponent: Q,
    pub truncation: f64,
    pub steps: usize,
}

/// p-adic Green value at a rational point. `upper` and `lower` are the
/// integer exponents u, e >= 0 with p^-e ||Y||^d <= ||F(Y)|| <= p^u ||Y||^d.
pub fn green_padic(f: &HomogMap, x: &[Q], p: u64, upper: i64, lower: i64, tol: f64) -> Result<PadicGreen> {
    let m0 = x.iter().filter_map(|xi| val(xi, p)).min().ok_or(Error::ZeroInput)?;
    let mut exponent = Q::from_integer(BigInt::from(-m0));
    let lnp = (p as f64).ln();
    let spread = upper.max(lower).max(0) as f64 * lnp;
    let n = steps_for(f.d, spread, tol);
    if n == 0 {
        return Ok(PadicGreen { exponent, truncation: 0.0, steps: 0 });
    }
    let loss = upper + lower + 1;
    let prec = n as i64 * loss + 64;
    let coeffs: Vec<Vec<Padic>> =
        f.forms.iter().map(|form| form.iter().map(|(_, c)| Padic::from_q(c, p, prec + upper + 64)).collect()).collect();
    let scale = pow_q(&Q::from_integer(BigInt::from(p)), -m0);
    let mut y: Vec<Padic> = x.iter().map(|xi| Padic::from_q(&(xi * &scale), p, prec)).collect();
    let mut w = Q::one();
    let dq = Q::from_integer(BigInt::from(f.d));
    for _ in 0..n {
        w /= &dq;
        let fy = f.eval_padic(&y, &coeffs);
        let m = fy
            .iter()
            .filter_map(Padic::valuation)
            .min()
            .ok_or_else(|| Error::PrecisionExhausted(format!("p-adic iterate vanished to working precision at p = {p}")))?;
        exponent -= &w * Q::from_integer(BigInt::from(m));
        y = fy.iter().map(|z| z.shift(-m)).collect();
    }
    let truncation = spread * w.to_f64().unwrap_or(0.0) / (f.d as f64 - 1.0);
    Ok(PadicGreen { exponent, truncation, steps: n })
}

/// The exponent e = floor(-log_p c) for a lower constant 0 < c <= 1, so
/// that ||F(Y)||_p >= c forces v_p(F(Y)) <= e.
pub fn lower_exponent(c: f64, p: u64) -> i64 {
    if c >= 1.0 {
        0
    } else {
        (-(c.ln()) / (p as f64).ln() + 1e-9).floor().max(0.0).to_i64().unwrap_or(i64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn square_lift() -> HomogMap {
        // (x^2 - 2 z^2, z^2)
        HomogMap::new(2, 2, vec![vec![(vec![2, 0], qi(1)), (vec![0, 2], qi(-2))], vec![(vec![0, 2], qi(1))]])
    }

    #[test]
    fn primitive_scaling() {
        let f = HomogMap::new(2, 2, vec![vec![(vec![2, 0], q(1, 2)), (vec![0, 2], q(1, 3))], vec![(vec![0, 2], q(2, 3))]]);
        let (g, l) = f.primitive_integer();
        assert_eq!(l, qi(6));
        assert_eq!(g.forms()[0][0].1, qi(3));
    }

    #[test]
    fn chebyshev_green_matches_log_u() {
        let f = square_lift();
        let (ln, y) = normalize_q(&[qi(3), qi(1)]);
        let g = green_arch(&f, ln, &y, LogBounds { upper: 3f64.ln(), lower: -(5f64.ln()) }, 1e-12);
        let u = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((g.value - u.ln()).abs() < 1e-10, "{}", g.value);
    }

    #[test]
    fn padic_green_good_reduction_is_exact() {
        let f = square_lift();
        let g = green_padic(&f, &[q(5, 4), qi(1)], 2, 0, 0, 1e-9).unwrap();
        assert_eq!(g.exponent, qi(2));
        assert_eq!(g.truncation, 0.0);
    }

    #[test]
    fn composition_degrees_multiply() {
        let f = square_lift();
        let ff = f.compose(&f);
        assert_eq!(ff.degree(), 4);
        let x = [qi(3), qi(1)];
        assert_eq!(ff.eval_q(&x), f.eval_q(&f.eval_q(&x)));
    }
}
