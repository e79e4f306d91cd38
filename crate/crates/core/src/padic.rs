//! p-adic numbers with explicit absolute precision.
//!
//! A value is p^val * unit + O(p^prec) with 0 <= unit < p^(prec - val) and
//! p not dividing unit; a value indistinguishable from zero has unit = 0 and
//! val = prec.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{pow_q, val, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: i64,
}

fn ppow(p: u64, e: i64) -> BigInt {
    if e <= 0 {
        BigInt::one()
    } else {
        BigInt::from(p).pow(e as u32)
    }
}

impl Padic {
    fn normalized(p: u64, mut val: i64, unit: BigInt, prec: i64) -> Self {
        if val >= prec {
            return Padic { p, val: prec, unit: BigInt::zero(), prec };
        }
        let mut u = unit.mod_floor(&ppow(p, prec - val));
        if u.is_zero() {
            return Padic { p, val: prec, unit: u, prec };
        }
        let bp = BigInt::from(p);
        loop {
            let (q, r) = u.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            u = q;
            val += 1;
        }
        Padic { p, val, unit: u, prec }
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        Padic { p, val: prec, unit: BigInt::zero(), prec }
    }

    /// x known to absolute precision `prec`.
    pub fn from_q(x: &Q, p: u64, prec: i64) -> Self {
        let Some(v) = val(x, p) else {
            return Self::zero(p, prec);
        };
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = ppow(p, prec - v);
        let shifted = x / pow_q(&Q::from_integer(BigInt::from(p)), v);
        let num = shifted.numer().mod_floor(&m);
        let den = shifted.denom().mod_floor(&m);
        let inv = den.modinv(&m).expect("denominator is a p-unit");
        Self::normalized(p, v, num * inv, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Valuation, or None when the value is zero to the working precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.unit.is_zero()).then_some(self.val)
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn add(&self, o: &Padic) -> Padic {
        let prec = self.prec.min(o.prec);
        let e = self.val.min(o.val).min(prec);
        let a = &self.unit * ppow(self.p, self.val - e);
        let b = &o.unit * ppow(self.p, o.val - e);
        Self::normalized(self.p, e, a + b, prec)
    }

    pub fn neg(&self) -> Padic {
        Self::normalized(self.p, self.val, -&self.unit, self.prec)
    }

    pub fn sub(&self, o: &Padic) -> Padic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Padic) -> Padic {
        let val = self.val + o.val;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::normalized(self.p, val, &self.unit * &o.unit, prec)
    }

    /// Multiplication by p^k (exact, shifts precision as well).
    pub fn shift(&self, k: i64) -> Padic {
        Padic { p: self.p, val: self.val + k, unit: self.unit.clone(), prec: self.prec + k }
    }

    pub fn pow(&self, e: u32) -> Padic {
        let mut acc = Padic::from_q(&Q::one(), self.p, self.prec.max(0) + 64);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The represented residue as a rational, p^val * unit.
    pub fn to_q(&self) -> Q {
        let pv = pow_q(&Q::from_integer(BigInt::from(self.p)), self.val);
        Q::from_integer(self.unit.clone()) * pv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_matches_rationals() {
        let p = 5;
        let a = q(7, 25);
        let b = q(-3, 2);
        let pa = Padic::from_q(&a, p, 30);
        let pb = Padic::from_q(&b, p, 30);
        assert_eq!(pa.valuation(), Some(-2));
        let prod = pa.mul(&pb);
        assert_eq!(prod, Padic::from_q(&(&a * &b), p, prod.precision()));
        let sum = pa.add(&pb);
        assert_eq!(sum, Padic::from_q(&(&a + &b), p, 30));
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let p = 3;
        let a = Padic::from_q(&q(10, 1), p, 5);
        let b = Padic::from_q(&q(1, 1), p, 5);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(2));
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), None);
    }
}
