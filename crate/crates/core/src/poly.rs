//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, lcm_denoms, to_f64, Q};

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Q>,
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Q::from_integer(v.into())).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|v| Q::from_integer(v.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    pub fn monomial(a: Q, k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// a*x + b
    pub fn linear(a: Q, b: Q) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, a| acc * x + to_f64(a))
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + to_f64(a))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }

    pub fn scale(&self, a: &Q) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a * Q::from_integer(k.into())).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// self(other(x))
    pub fn compose(&self, other: &QPoly) -> Self {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * other) + &QPoly::constant(a.clone());
        }
        acc
    }

    /// self(x + a)
    pub fn shift(&self, a: &Q) -> Self {
        self.compose(&QPoly::linear(Q::one(), a.clone()))
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let dl = d.lc();
        let dd = d.degree();
        let mut r = self.c.clone();
        let mut qc = vec![Q::zero(); self.c.len() - dd];
        for k in (0..qc.len()).rev() {
            let coef = &r[k + dd] / &dl;
            if !coef.is_zero() {
                for (i, b) in d.c.iter().enumerate() {
                    let t = &coef * b;
                    r[k + i] -= t;
                }
            }
            qc[k] = coef;
        }
        r.truncate(dd);
        (QPoly::new(qc), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Exact division; returns None if d does not divide self.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        self.scale(&l.recip())
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.primitive_q(), other.primitive_q());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_q();
        }
        a.monic()
    }

    /// Extended gcd: (g, s, t) with s*self + t*other = g, g monic.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            let s = &s0 - &(&qt * &s1);
            let t = &t0 - &(&qt * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of self modulo m, if it exists.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        (g.degree() == 0 && !g.is_zero()).then(|| s.rem(m))
    }

    /// Scales to an integer polynomial with coprime coefficients and a
    /// positive leading coefficient (as a rational polynomial).
    pub fn primitive_q(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        QPoly::from_bigints(&self.primitive_int())
    }

    /// Primitive integer coefficient vector with positive leading term.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = lcm_denoms(self.c.iter());
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = g.gcd(a);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|a| a / &g).collect()
    }

    /// Squarefree part (monic).
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Multiplicity of the root 0.
    pub fn ord_zero(&self) -> usize {
        self.c.iter().take_while(|a| a.is_zero()).count()
    }

    /// Largest exponent of a nonzero term and its support set.
    pub fn support(&self) -> Vec<usize> {
        self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(k, _)| k).collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.support().len() == 1
    }

    /// Reverses the coefficient list: x^deg * p(1/x).
    pub fn reversed(&self) -> QPoly {
        let mut c = self.c.clone();
        c.reverse();
        QPoly::new(c)
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coef = fmt_q(&mag);
            match k {
                0 => s.push_str(&coef),
                _ => {
                    if !mag.is_one() {
                        if mag.is_integer() {
                            s.push_str(&coef);
                        } else {
                            s.push_str(&format!("({coef})"));
                        }
                        s.push('*');
                    }
                    s.push_str(var);
                    if k > 1 {
                        s.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        s
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({})", self)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, o: QPoly) -> QPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn divrem_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = QPoly::from_ints(&[1, 1]); // x + 1
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = QPoly::from_ints(&[2, 3, 1]); // (x+1)(x+2)
        assert_eq!(a.gcd(&c), b);
    }

    #[test]
    fn compose_and_shift() {
        let f = QPoly::from_ints(&[-2, 0, 1]);
        let ff = f.compose(&f);
        assert_eq!(ff, QPoly::from_ints(&[2, 0, -4, 0, 1]));
        assert_eq!(f.shift(&q(1, 1)), QPoly::from_ints(&[-1, 2, 1]));
    }

    #[test]
    fn inverse_mod_quadratic() {
        let m = QPoly::from_ints(&[-2, 0, 1]);
        let a = QPoly::from_ints(&[1, 1]); // 1 + t
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m), QPoly::one());
    }

    #[test]
    fn display() {
        let f = QPoly::new(vec![q(-29, 16), Q::zero(), Q::one()]);
        assert_eq!(f.to_string(), "x^2 - 29/16");
        assert_eq!(QPoly::from_ints(&[0, -3, 0, 1]).to_string(), "x^3 - 3*x");
    }
}
