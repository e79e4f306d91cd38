//! Simultaneous complex root finding (Aberth-Ehrlich) with a posteriori
//! inclusion discs.
//!
//! For a polynomial of degree n and any z with p'(z) != 0, the disc of
//! radius n|p(z)/p'(z)| around z contains a root. When the n discs are
//! pairwise disjoint each contains exactly one root.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::rational::to_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootDisc {
    pub center: Complex64,
    pub radius: f64,
}

/// Finds all n roots of the polynomial described by `eval`, which returns
/// (p(z), p'(z), rounding-error estimate for p(z)).
pub fn aberth<F>(n: usize, eval: F, radius_hint: f64, max_iter: usize) -> Result<Vec<RootDisc>>
where
    F: Fn(Complex64) -> (Complex64, Complex64, f64),
{
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = radius_hint.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(r, theta)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, _) = eval(z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 1e-15 * z[i].norm().max(1.0) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    // A couple of plain Newton polishing steps, then certify.
    let mut out = Vec::with_capacity(n);
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp, _) = eval(*zi);
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zi -= step;
            }
        }
        let (p, dp, err) = eval(*zi);
        let num = p.norm() + err;
        let den = dp.norm() - err * 1e-3;
        let radius = if den > 0.0 { n as f64 * num / den } else { f64::INFINITY };
        out.push(RootDisc { center: *zi, radius: radius.max(f64::EPSILON * zi.norm()) });
    }
    Ok(out)
}

/// Whether the discs are pairwise disjoint (which certifies one root per disc).
pub fn discs_disjoint(discs: &[RootDisc]) -> bool {
    let mut sorted: Vec<&RootDisc> = discs.iter().collect();
    sorted.sort_by(|a, b| (a.center.re - a.radius).total_cmp(&(b.center.re - b.radius)));
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if b.center.re - b.radius > a.center.re + a.radius {
                break;
            }
            if (a.center - b.center).norm() <= a.radius + b.radius {
                return false;
            }
        }
    }
    true
}

/// Horner evaluation of a real-coefficient polynomial with a running
/// rounding-error bound.
pub fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let az = z.norm();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        mag = mag * az + a.abs();
    }
    let eps = 4.0 * f64::EPSILON * (c.len() as f64 + 1.0);
    (p, dp, eps * mag)
}

/// Cauchy bound on the moduli of the roots.
pub fn root_bound(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    let lc = c[n].abs();
    1.0 + c[..n].iter().map(|a| a.abs() / lc).fold(0.0, f64::max)
}

/// All complex roots of a rational polynomial, sorted by (re, im), with
/// certified inclusion discs. Errors if the discs cannot be separated.
pub fn complex_roots(f: &QPoly) -> Result<Vec<RootDisc>> {
    let n = f.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let sf = f.squarefree_part();
    if sf.degree() != n {
        return Err(Error::RootIsolationFailure("polynomial has repeated roots".into()));
    }
    let c: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    if c.iter().any(|a| !a.is_finite()) {
        return Err(Error::RootIsolationFailure("coefficients overflow f64".into()));
    }
    // Start from a circle of the geometric-mean modulus; the Cauchy
    // bound is used only as a sanity ceiling.
    let gm = (c[0].abs().max(f64::MIN_POSITIVE) / c[n].abs()).powf(1.0 / n as f64);
    let hint = gm.clamp(1e-3, root_bound(&c));
    let mut roots = aberth(n, |z| horner(&c, z), hint, 500)?;
    if !discs_disjoint(&roots) || roots.iter().any(|d| !d.radius.is_finite() || d.radius > 1e-6 * d.center.norm().max(1.0)) {
        return Err(Error::RootIsolationFailure(format!("could not isolate the {n} roots of {f}")));
    }
    roots.sort_by(|a, b| a.center.re.total_cmp(&b.center.re).then(a.center.im.total_cmp(&b.center.im)));
    Ok(roots)
}
