//! Helpers around exact rationals: logarithms of big integers, p-adic
//! valuations, bit sizes and formatting.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Natural log of |n| for a nonzero big integer, accurate to a few ulps
/// even when n does not fit in an f64.
pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// ln|x| for nonzero x.
pub fn ln_abs(x: &Q) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// ln max(|x|, 1).
pub fn ln_plus(x: &Q) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.numer().magnitude() <= x.denom().magnitude() {
        0.0
    } else {
        ln_abs(x).max(0.0)
    }
}

/// Multiplicity of p in the nonzero integer n.
pub fn val_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (qt, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = qt;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn val(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64)
}

/// Sum of the bit lengths of numerator and denominator.
pub fn bits(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

pub fn to_f64(x: &Q) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    if x.is_zero() {
        return 0.0;
    }
    s * ln_abs(x).exp()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a`, `-a`, `a/b` with integer a, b (b != 0).
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Q::new(a, b))
    } else {
        let a: BigInt = s.parse().ok()?;
        Some(Q::from_integer(a))
    }
}

/// All reduced rationals a/b with |a| <= num_bound and 1 <= b <= den_bound,
/// in increasing order.
pub fn rational_box(num_bound: i64, den_bound: i64) -> Vec<Q> {
    let mut out = Vec::new();
    for b in 1..=den_bound {
        for a in -num_bound..=num_bound {
            if a.gcd(&b) == 1 || a == 0 && b == 1 {
                out.push(q(a, b));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

/// Least common multiple of the denominators.
pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `base^e` for rational base and signed exponent.
pub fn pow_q(base: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Exact k-th root of a rational if it exists (k >= 1), preferring the
/// positive root.
pub fn rational_root(x: &Q, k: u32) -> Option<Q> {
    if k == 1 {
        return Some(x.clone());
    }
    if x.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return rational_root(&-x, k).map(|r| -r);
    }
    let n = x.numer().to_biguint()?;
    let d = x.denom().to_biguint()?;
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    if rn.pow(k) == n && rd.pow(k) == d {
        Some(Q::new(BigInt::from(rn), BigInt::from(rd)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_huge_integer() {
        let n = BigInt::from(3u32).pow(2000);
        let expect = 2000.0 * 3f64.ln();
        assert!((ln_bigint(&n) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn valuations() {
        assert_eq!(val(&q(6, 1), 2), Some(1));
        assert_eq!(val(&q(2, 3), 3), Some(-1));
        assert_eq!(val(&q(0, 1), 3), None);
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(rational_root(&q(-8, 1), 3), Some(q(-2, 1)));
        assert_eq!(rational_root(&q(2, 1), 2), None);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-29/16", "0"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_none());
    }
}
