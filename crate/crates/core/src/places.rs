//! Places of Q, normalized absolute values and the product formula.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::heights::HeightValue;
use crate::intfactor::{factor_biguint, is_prime_u64};
use crate::rational::{ln_abs, val, Q};
use crate::system::DynamicalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    /// [Q_v : Q_v] for the base field; reserved for number-field bases.
    pub fn local_degree(&self) -> u32 {
        1
    }

    /// ln p for a finite place, 0 for the archimedean one.
    pub fn ln_p(&self) -> f64 {
        match self {
            Place::Archimedean => 0.0,
            Place::Finite(p) => (*p as f64).ln(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// A summand log|x|_v: an exact multiple of log p at finite places, a
/// float with an error bound at the archimedean place.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalValue {
    LogP(Q),
    Numeric { value: f64, error: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalLog {
    pub place: Place,
    pub value: LocalValue,
}

impl LocalLog {
    pub fn to_f64(&self) -> f64 {
        match &self.value {
            LocalValue::LogP(e) => crate::rational::to_f64(e) * self.place.ln_p(),
            LocalValue::Numeric { value, .. } => *value,
        }
    }

    pub fn error(&self) -> f64 {
        match &self.value {
            LocalValue::LogP(_) => 0.0,
            LocalValue::Numeric { error, .. } => *error,
        }
    }
}

/// A local Green value: exact (a multiple of log p) or numeric at the
/// archimedean place, plus a truncation bound for the neglected tail.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGreen {
    pub place: Place,
    pub value: LocalValue,
    pub truncation: f64,
}

impl LocalGreen {
    pub fn exact_zero(place: Place) -> Self {
        let value = match place {
            Place::Archimedean => LocalValue::Numeric { value: 0.0, error: 0.0 },
            Place::Finite(_) => LocalValue::LogP(Q::zero()),
        };
        LocalGreen { place, value, truncation: 0.0 }
    }

    pub fn numeric(value: f64, rounding: f64, truncation: f64) -> Self {
        LocalGreen { place: Place::Archimedean, value: LocalValue::Numeric { value, error: rounding }, truncation }
    }

    pub fn log_p(p: u64, exponent: Q, truncation: f64) -> Self {
        LocalGreen { place: Place::Finite(p), value: LocalValue::LogP(exponent), truncation }
    }

    pub fn to_f64(&self) -> f64 {
        LocalLog { place: self.place, value: self.value.clone() }.to_f64()
    }

    /// Rounding plus truncation.
    pub fn error(&self) -> f64 {
        let rounding = match &self.value {
            LocalValue::LogP(_) => 0.0,
            LocalValue::Numeric { error, .. } => *error,
        };
        rounding + self.truncation
    }

    pub fn is_exact_zero(&self) -> bool {
        self.truncation == 0.0
            && match &self.value {
                LocalValue::LogP(e) => e.is_zero(),
                LocalValue::Numeric { value, error } => *value == 0.0 && *error == 0.0,
            }
    }

    /// The larger of two values at one place; the error is the larger error.
    pub fn max(&self, o: &LocalGreen) -> LocalGreen {
        let mut out = if self.to_f64() >= o.to_f64() { self.clone() } else { o.clone() };
        let (e1, e2) = (self.error(), o.error());
        out.truncation += e1.max(e2) - out.error();
        out
    }

    pub fn to_height(&self) -> HeightValue {
        let mut h = HeightValue::zero();
        match (&self.value, self.place) {
            (LocalValue::Numeric { value, error }, _) => {
                h.archimedean = *value;
                h.archimedean_error = *error;
            }
            (LocalValue::LogP(e), Place::Finite(p)) => h.add_finite(p, e.clone()),
            (LocalValue::LogP(_), Place::Archimedean) => unreachable!("exact values live at finite places"),
        }
        h.truncation_error = self.truncation;
        h
    }
}

impl fmt::Display for LocalGreen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            LocalValue::LogP(e) => write!(f, "{} log {}", crate::rational::fmt_q(e), self.place)?,
            LocalValue::Numeric { value, .. } => write!(f, "{value:.12}")?,
        }
        if self.error() > 0.0 {
            write!(f, " (+/- {:.1e})", self.error())?;
        }
        Ok(())
    }
}

/// Rounding bound for a logarithm of magnitude `v` computed in f64.
pub(crate) fn ln_error(v: f64) -> f64 {
    8.0 * f64::EPSILON * (1.0 + v.abs())
}

pub fn abs_log(x: &Q, v: Place) -> Result<LocalLog> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let value = match v {
        Place::Finite(p) => LocalValue::LogP(Q::from_integer(BigInt::from(-val(x, p).unwrap()))),
        Place::Archimedean => {
            let l = ln_abs(x);
            LocalValue::Numeric { value: l, error: ln_error(l) }
        }
    };
    Ok(LocalLog { place: v, value })
}

/// Primes dividing the numerator or denominator of x; none for x = 0.
pub fn support_primes(x: &Q) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for n in [x.numer(), x.denom()].into_iter().filter(|n| !n.is_zero()) {
        let f = factor_biguint(n.magnitude());
        for (b, _) in f.factors {
            if let Some(p) = b.to_u64() {
                out.insert(p);
            }
        }
    }
    out.into_iter().collect()
}

/// Sum of log|x|_v over the archimedean place and every prime in the
/// support of x. The finite exponents are exact; the result is the
/// archimedean rounding residue.
pub fn product_formula_defect(x: &Q) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut logs = vec![abs_log(x, Place::Archimedean)?];
    // Check the exact part symbolically: prod p^{-e_p} must equal |x|.
    let mut recon = Q::from_integer(1.into());
    for p in support_primes(x) {
        let l = abs_log(x, Place::Finite(p))?;
        if let LocalValue::LogP(e) = &l.value {
            recon *= crate::rational::pow_q(&Q::from_integer(BigInt::from(p)), -e.to_integer().to_i64().unwrap());
        }
        logs.push(l);
    }
    debug_assert_eq!(recon, x.abs());
    Ok(logs.iter().map(LocalLog::to_f64).sum())
}

/// Places of bad reduction: the archimedean place plus every prime at
/// which the map fails to have good reduction in the sense used by the
/// Green-function code (outside this set the local Green function is
/// log+ of the sup-norm).
pub fn bad_places(map: &DynamicalSystem) -> BTreeSet<Place> {
    let mut out = BTreeSet::from([Place::Archimedean]);
    out.extend(map.bad_primes().into_iter().map(Place::Finite));
    out
}

/// Primes dividing a nonzero integer that fit in 64 bits.
pub(crate) fn primes_of(n: &BigInt) -> Vec<u64> {
    if n.is_zero() {
        return Vec::new();
    }
    factor_biguint(n.magnitude()).factors.into_iter().filter_map(|(b, _)| b.to_u64()).filter(|&p| is_prime_u64(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn examples() {
        assert_eq!(abs_log(&q(6, 1), Place::Finite(2)).unwrap().value, LocalValue::LogP(q(-1, 1)));
        assert_eq!(abs_log(&q(2, 3), Place::Finite(3)).unwrap().value, LocalValue::LogP(q(1, 1)));
        let a = abs_log(&q(-5, 1), Place::Archimedean).unwrap();
        assert!((a.to_f64() - 5f64.ln()).abs() <= a.error());
        assert_eq!(abs_log(&q(0, 1), Place::Archimedean), Err(Error::ZeroInput));
    }

    #[test]
    fn defect_vanishes() {
        for x in [q(6, 1), q(1, 1), q(-22, 7)] {
            assert!(product_formula_defect(&x).unwrap().abs() < 1e-14);
        }
    }
}
