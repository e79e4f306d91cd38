//! Resultants over Q, univariate and bivariate (eliminating y).

use num_traits::{One, Zero};

use crate::bipoly::QPoly2;
use crate::poly::QPoly;
use crate::rational::{pow_q, Q};

/// Res(a, b) by the Euclidean recurrence over Q.
pub fn resultant(a: &QPoly, b: &QPoly) -> Q {
    if a.is_zero() || b.is_zero() {
        return Q::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = Q::one();
    loop {
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc * pow_q(&b.lc(), da as i64);
        }
        if da == 0 {
            return acc * pow_q(&a.lc(), db as i64);
        }
        if da < db {
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Q::zero();
        }
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow_q(&b.lc(), (da - r.degree()) as i64);
        a = b;
        b = r;
    }
}

pub fn discriminant(f: &QPoly) -> Q {
    let n = f.degree();
    let r = resultant(f, &f.derivative());
    let s = if (n * (n.saturating_sub(1)) / 2) % 2 == 1 { -r } else { r };
    s / f.lc()
}

/// Interpolates the unique polynomial of degree < xs.len() through the
/// points (xs[i], ys[i]) using Newton divided differences.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> QPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = QPoly::zero();
    for i in (0..n).rev() {
        p = &(&p * &QPoly::linear(Q::one(), -xs[i].clone())) + &QPoly::constant(dd[i].clone());
    }
    p
}

/// Res_y(f, g) as a polynomial in x, by evaluation at integer abscissae
/// and interpolation.
pub fn resultant_y(f: &QPoly2, g: &QPoly2) -> QPoly {
    if f.is_zero() || g.is_zero() {
        return QPoly::zero();
    }
    let (m, n) = (f.deg_y(), g.deg_y());
    if m == 0 && n == 0 {
        return QPoly::one();
    }
    if m == 0 {
        return f.y_coeff(0).pow(n as u32);
    }
    if n == 0 {
        return g.y_coeff(0).pow(m as u32);
    }
    let bound = m * g.deg_x() + n * f.deg_x();
    let (lf, lg) = (f.y_coeff(m), g.y_coeff(n));
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while xs.len() <= bound {
        // 0, 1, -1, 2, -2, ...
        let x0 = Q::from_integer(if k % 2 == 0 { (-(k / 2)).into() } else { ((k + 1) / 2).into() });
        k += 1;
        if lf.eval(&x0).is_zero() || lg.eval(&x0).is_zero() {
            continue;
        }
        ys.push(resultant(&f.eval_x(&x0), &g.eval_x(&x0)));
        xs.push(x0);
    }
    interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn sylvester_det(a: &QPoly, b: &QPoly) -> Q {
        // Dense Sylvester determinant by Gaussian elimination; an
        // independent check of the Euclidean recurrence.
        let (m, n) = (a.degree(), b.degree());
        let size = m + n;
        let mut mat = vec![vec![Q::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = b.coeff(n - j);
            }
        }
        let mut det = Q::one();
        for c in 0..size {
            let Some(piv) = (c..size).find(|&r| !mat[r][c].is_zero()) else {
                return Q::zero();
            };
            if piv != c {
                mat.swap(piv, c);
                det = -det;
            }
            det *= mat[c][c].clone();
            for r in c + 1..size {
                let fct = &mat[r][c] / &mat[c][c];
                for k in c..size {
                    let t = &fct * &mat[c][k];
                    mat[r][k] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn matches_sylvester() {
        let a = QPoly::from_ints(&[3, -1, 0, 2]);
        let b = QPoly::from_ints(&[-5, 4, 7]);
        assert_eq!(resultant(&a, &b), sylvester_det(&a, &b));
        assert_eq!(resultant(&b, &a), sylvester_det(&b, &a));
        let c = QPoly::from_ints(&[1, 1]);
        assert_eq!(resultant(&a, &c), sylvester_det(&a, &c));
    }

    #[test]
    fn common_root_gives_zero() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[-1, 1]);
        assert!(resultant(&a, &b).is_zero());
        assert_eq!(discriminant(&QPoly::from_ints(&[-2, 0, 1])), qi(8));
    }

    #[test]
    fn bivariate_elimination() {
        // y^2 - x and y - x: Res_y = x^2 - x
        let f = QPoly2::from_terms(&[(0, 2, qi(1)), (1, 0, qi(-1))]);
        let g = QPoly2::from_terms(&[(0, 1, qi(1)), (1, 0, qi(-1))]);
        assert_eq!(resultant_y(&f, &g), QPoly::from_ints(&[0, -1, 1]));
    }
}
