//! Bivariate polynomials over Q, stored as polynomials in y whose
//! coefficients are polynomials in x.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::poly::QPoly;
use crate::rational::{fmt_q, to_f64, Q};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly2 {
    /// c[j] is the coefficient of y^j.
    c: Vec<QPoly>,
}

impl QPoly2 {
    pub fn new(mut c: Vec<QPoly>) -> Self {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        QPoly2 { c }
    }

    pub fn zero() -> Self {
        QPoly2 { c: Vec::new() }
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![QPoly::constant(a)])
    }

    pub fn x() -> Self {
        Self::from_x(&QPoly::x())
    }

    pub fn y() -> Self {
        Self::new(vec![QPoly::zero(), QPoly::one()])
    }

    /// Embeds a polynomial in x.
    pub fn from_x(p: &QPoly) -> Self {
        Self::new(vec![p.clone()])
    }

    /// Embeds a polynomial in y.
    pub fn from_y(p: &QPoly) -> Self {
        Self::new(p.coeffs().iter().map(|a| QPoly::constant(a.clone())).collect())
    }

    /// Builds from (i, j, coefficient of x^i y^j) terms.
    pub fn from_terms(terms: &[(usize, usize, Q)]) -> Self {
        let mut out = QPoly2::zero();
        for (i, j, a) in terms {
            out = &out + &QPoly2::term(a.clone(), *i, *j);
        }
        out
    }

    pub fn term(a: Q, i: usize, j: usize) -> Self {
        let mut c = vec![QPoly::zero(); j + 1];
        c[j] = QPoly::monomial(a, i);
        Self::new(c)
    }

    pub fn y_coeffs(&self) -> &[QPoly] {
        &self.c
    }

    pub fn y_coeff(&self, j: usize) -> QPoly {
        self.c.get(j).cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Q {
        self.y_coeff(j).coeff(i)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_y(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.c.iter().map(|p| if p.is_zero() { 0 } else { p.degree() }).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms().iter().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    /// Nonzero terms as (i, j, coefficient of x^i y^j).
    pub fn terms(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::new();
        for (j, p) in self.c.iter().enumerate() {
            for (i, a) in p.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    out.push((i, j, a.clone()));
                }
            }
        }
        out
    }

    pub fn coefficients(&self) -> Vec<Q> {
        self.terms().into_iter().map(|(_, _, a)| a).collect()
    }

    /// Whether the polynomial only involves x.
    pub fn as_x_poly(&self) -> Option<QPoly> {
        (self.c.len() <= 1).then(|| self.y_coeff(0))
    }

    /// Whether the polynomial only involves y.
    pub fn as_y_poly(&self) -> Option<QPoly> {
        if self.c.iter().all(|p| p.degree() == 0) {
            Some(QPoly::new(self.c.iter().map(|p| p.coeff(0)).collect()))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let mut acc = Q::zero();
        for p in self.c.iter().rev() {
            acc = acc * y + p.eval(x);
        }
        acc
    }

    pub fn eval_c(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, p| acc * y + p.eval_c(x))
    }

    /// Substitutes x = a, leaving a polynomial in y.
    pub fn eval_x(&self, a: &Q) -> QPoly {
        QPoly::new(self.c.iter().map(|p| p.eval(a)).collect())
    }

    /// Substitutes y = b, leaving a polynomial in x.
    pub fn eval_y(&self, b: &Q) -> QPoly {
        let mut acc = QPoly::zero();
        for p in self.c.iter().rev() {
            acc = &acc.scale(b) + p;
        }
        acc
    }

    /// Value of the degree-`d` homogenization at (x, y, z).
    pub fn eval_homog_c(&self, d: usize, x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, j, a) in self.terms() {
            acc += x.powu(i as u32) * y.powu(j as u32) * z.powu((d - i - j) as u32) * to_f64(&a);
        }
        acc
    }

    /// self(f(x, y), g(x, y))
    pub fn compose(&self, f: &QPoly2, g: &QPoly2) -> QPoly2 {
        let mut acc = QPoly2::zero();
        for p in self.c.iter().rev() {
            let px = p.coeffs().iter().rev().fold(QPoly2::zero(), |a, c| &(&a * f) + &QPoly2::constant(c.clone()));
            acc = &(&acc * g) + &px;
        }
        acc
    }

    /// self(y, x)
    pub fn swap(&self) -> QPoly2 {
        QPoly2::from_terms(&self.terms().into_iter().map(|(i, j, a)| (j, i, a)).collect::<Vec<_>>())
    }

    pub fn partial_x(&self) -> QPoly2 {
        QPoly2::new(self.c.iter().map(|p| p.derivative()).collect())
    }

    pub fn partial_y(&self) -> QPoly2 {
        QPoly2::new(self.c.iter().enumerate().skip(1).map(|(j, p)| p.scale(&Q::from_integer(j.into()))).collect())
    }

    pub fn scale(&self, a: &Q) -> QPoly2 {
        QPoly2::new(self.c.iter().map(|p| p.scale(a)).collect())
    }

    /// Degree-d homogeneous component.
    pub fn homogeneous_part(&self, d: usize) -> QPoly2 {
        QPoly2::from_terms(&self.terms().into_iter().filter(|(i, j, _)| i + j == d).collect::<Vec<_>>())
    }

    pub fn display_vars(&self, xv: &str, yv: &str) -> String {
        let mut terms = self.terms();
        if terms.is_empty() {
            return "0".into();
        }
        terms.sort_by(|a, b| (b.0 + b.1, b.1).cmp(&(a.0 + a.1, a.1)));
        let mut s = String::new();
        for (i, j, a) in terms {
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i > 1 { format!("{xv}^{i}") } else { xv.to_string() });
            }
            if j > 0 {
                mono.push(if j > 1 { format!("{yv}^{j}") } else { yv.to_string() });
            }
            if mono.is_empty() {
                s.push_str(&fmt_q(&mag));
            } else {
                if !mag.is_one() {
                    if mag.is_integer() {
                        s.push_str(&fmt_q(&mag));
                    } else {
                        s.push_str(&format!("({})", fmt_q(&mag)));
                    }
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for QPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_vars("x", "y"))
    }
}

impl fmt::Debug for QPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly2({})", self)
    }
}

impl Add for &QPoly2 {
    type Output = QPoly2;
    fn add(self, o: &QPoly2) -> QPoly2 {
        let n = self.c.len().max(o.c.len());
        QPoly2::new((0..n).map(|j| &self.y_coeff(j) + &o.y_coeff(j)).collect())
    }
}

impl Sub for &QPoly2 {
    type Output = QPoly2;
    fn sub(self, o: &QPoly2) -> QPoly2 {
        let n = self.c.len().max(o.c.len());
        QPoly2::new((0..n).map(|j| &self.y_coeff(j) - &o.y_coeff(j)).collect())
    }
}

impl Mul for &QPoly2 {
    type Output = QPoly2;
    fn mul(self, o: &QPoly2) -> QPoly2 {
        if self.is_zero() || o.is_zero() {
            return QPoly2::zero();
        }
        let mut c = vec![QPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        QPoly2::new(c)
    }
}

impl Neg for &QPoly2 {
    type Output = QPoly2;
    fn neg(self) -> QPoly2 {
        QPoly2::new(self.c.iter().map(|p| -p).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn compose_power_maps() {
        let x2 = &QPoly2::x() * &QPoly2::x();
        let y2 = &QPoly2::y() * &QPoly2::y();
        let x4 = x2.compose(&x2, &y2);
        assert_eq!(x4, QPoly2::term(qi(1), 4, 0));
        let mixed = QPoly2::from_terms(&[(0, 2, qi(1)), (1, 1, qi(1))]);
        let c = mixed.compose(&x2, &y2);
        assert_eq!(c, QPoly2::from_terms(&[(0, 4, qi(1)), (2, 2, qi(1))]));
    }

    #[test]
    fn eval_and_display() {
        let p = QPoly2::from_terms(&[(0, 2, qi(1)), (1, 1, qi(1)), (0, 0, Q::new(3.into(), 4.into()))]);
        assert_eq!(p.eval(&qi(1), &qi(2)), Q::new(27.into(), 4.into()));
        assert_eq!(p.to_string(), "y^2 + x*y + 3/4");
        assert_eq!(p.total_degree(), 2);
    }
}
