//! Polynomials over a field supplied as a context object.
//!
//! The classification code needs exact arithmetic over Q and over simple
//! algebraic extensions Q[t]/(m(t)) (quadratic fields for conjugators,
//! residue fields of irreducible factors for the elimination solver), so
//! the field is passed explicitly instead of being baked into the
//! coefficient type.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::poly::QPoly;
use crate::rational::Q;

pub trait Field {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_q(&self, q: &Q) -> Self::E;

    fn div(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    fn pow(&self, a: &Self::E, e: i64) -> Option<Self::E> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        Some(acc)
    }

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type E = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn from_q(&self, q: &Q) -> Q {
        q.clone()
    }
}

/// Q[t]/(m(t)) for a monic irreducible m. Elements are reduced residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    modulus: QPoly,
}

impl NumberField {
    pub fn new(modulus: &QPoly) -> Self {
        assert!(modulus.degree() >= 1);
        NumberField { modulus: modulus.monic() }
    }

    /// Q(sqrt(r)) presented as Q[t]/(t^2 - r).
    pub fn quadratic(r: &Q) -> Self {
        Self::new(&QPoly::new(vec![-r, Q::zero(), Q::one()]))
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    /// The class of t.
    pub fn generator(&self) -> QPoly {
        QPoly::x().rem(&self.modulus)
    }

    pub fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.modulus)
    }

    /// The element as a rational, if it lies in Q.
    pub fn as_rational(&self, a: &QPoly) -> Option<Q> {
        (a.degree() == 0).then(|| a.coeff(0))
    }
}

impl Field for NumberField {
    type E = QPoly;
    fn zero(&self) -> QPoly {
        QPoly::zero()
    }
    fn one(&self) -> QPoly {
        QPoly::one()
    }
    fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a + b
    }
    fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a - b
    }
    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        (a * b).rem(&self.modulus)
    }
    fn neg(&self, a: &QPoly) -> QPoly {
        -a
    }
    fn inv(&self, a: &QPoly) -> Option<QPoly> {
        if a.is_zero() {
            return None;
        }
        a.inverse_mod(&self.modulus)
    }
    fn is_zero(&self, a: &QPoly) -> bool {
        a.is_zero()
    }
    fn from_q(&self, q: &Q) -> QPoly {
        QPoly::constant(q.clone())
    }
}

/// Free functions on coefficient vectors (lowest degree first).
pub mod fp {
    use super::*;

    pub fn trim<F: Field>(k: &F, mut v: Vec<F::E>) -> Vec<F::E> {
        while v.last().is_some_and(|a| k.is_zero(a)) {
            v.pop();
        }
        v
    }

    pub fn from_qpoly<F: Field>(k: &F, p: &QPoly) -> Vec<F::E> {
        p.coeffs().iter().map(|a| k.from_q(a)).collect()
    }

    pub fn degree<E>(p: &[E]) -> usize {
        p.len().saturating_sub(1)
    }

    pub fn coeff<F: Field>(k: &F, p: &[F::E], i: usize) -> F::E {
        p.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add<F: Field>(k: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let n = a.len().max(b.len());
        trim(k, (0..n).map(|i| k.add(&coeff(k, a, i), &coeff(k, b, i))).collect())
    }

    pub fn sub<F: Field>(k: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let n = a.len().max(b.len());
        trim(k, (0..n).map(|i| k.sub(&coeff(k, a, i), &coeff(k, b, i))).collect())
    }

    pub fn scale<F: Field>(k: &F, a: &[F::E], s: &F::E) -> Vec<F::E> {
        trim(k, a.iter().map(|x| k.mul(x, s)).collect())
    }

    pub fn mul<F: Field>(k: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] = k.add(&c[i + j], &k.mul(x, y));
            }
        }
        trim(k, c)
    }

    pub fn eval<F: Field>(k: &F, p: &[F::E], x: &F::E) -> F::E {
        p.iter().rev().fold(k.zero(), |acc, a| k.add(&k.mul(&acc, x), a))
    }

    /// p(q(x))
    pub fn compose<F: Field>(k: &F, p: &[F::E], q: &[F::E]) -> Vec<F::E> {
        let mut acc: Vec<F::E> = Vec::new();
        for a in p.iter().rev() {
            acc = add(k, &mul(k, &acc, q), std::slice::from_ref(a));
        }
        acc
    }

    /// alpha*x + beta
    pub fn linear<F: Field>(k: &F, alpha: &F::E, beta: &F::E) -> Vec<F::E> {
        trim(k, vec![beta.clone(), alpha.clone()])
    }

    pub fn divrem<F: Field>(k: &F, a: &[F::E], d: &[F::E]) -> Option<(Vec<F::E>, Vec<F::E>)> {
        let d = trim(k, d.to_vec());
        let inv = k.inv(d.last()?)?;
        if a.len() < d.len() {
            return Some((Vec::new(), trim(k, a.to_vec())));
        }
        let dd = d.len() - 1;
        let mut r = a.to_vec();
        let mut qc = vec![k.zero(); a.len() - dd];
        for i in (0..qc.len()).rev() {
            let c = k.mul(&r[i + dd], &inv);
            if !k.is_zero(&c) {
                for (j, b) in d.iter().enumerate() {
                    r[i + j] = k.sub(&r[i + j], &k.mul(&c, b));
                }
            }
            qc[i] = c;
        }
        r.truncate(dd);
        Some((trim(k, qc), trim(k, r)))
    }

    pub fn monic<F: Field>(k: &F, a: &[F::E]) -> Vec<F::E> {
        match a.last() {
            None => Vec::new(),
            Some(l) => scale(k, a, &k.inv(l).expect("nonzero leading coefficient")),
        }
    }

    pub fn gcd<F: Field>(k: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let mut a = trim(k, a.to_vec());
        let mut b = trim(k, b.to_vec());
        while !b.is_empty() {
            let (_, r) = divrem(k, &a, &b).expect("field division");
            a = b;
            b = r;
        }
        monic(k, &a)
    }

    pub fn is_zero<F: Field>(k: &F, a: &[F::E]) -> bool {
        trim(k, a.to_vec()).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn quadratic_field_arithmetic() {
        let k = NumberField::quadratic(&qi(2));
        let s = k.generator();
        assert_eq!(k.mul(&s, &s), QPoly::constant(qi(2)));
        let a = k.add(&k.one(), &s);
        let inv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), k.one());
    }

    #[test]
    fn gcd_over_extension() {
        // over Q(sqrt 2): gcd(y^2 - 2, y - sqrt2) = y - sqrt2
        let k = NumberField::quadratic(&qi(2));
        let s = k.generator();
        let a = vec![k.from_q(&qi(-2)), k.zero(), k.one()];
        let b = vec![k.neg(&s), k.one()];
        assert_eq!(fp::gcd(&k, &a, &b), b);
    }
}
