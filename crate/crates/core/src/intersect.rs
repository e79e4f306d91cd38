//! Common zeros of F^m(p) = C(p) and G^n(p) = C(p) on A^1 and A^2,
//! heights of the solutions, curves through them, and period-point
//! distributions.
//!
//! Plane systems are solved by elimination: after a shear x = t - s y the
//! gcd of the pairwise resultants in y gives R(t); for each irreducible
//! factor r of R the fiber equations have a gcd over Q[t]/(r) which must be
//! linear in y, giving y (and x) as polynomials in a root of r. Every
//! component is re-substituted exactly.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::fpoly::{fp, Field, NumberField};
use crate::henon::canonical_heights_henon;
use crate::heights::{AlgebraicNumber, AlgebraicPoint, HeightValue};
use crate::p1dyn::{canonical_height_p1, canonical_height_p1_algebraic, P1Point, RationalMapP1};
use crate::poly::QPoly;
use crate::rational::{bits, Q};
use crate::resultant::resultant_y;
use crate::roots::{aberth, discs_disjoint, RootDisc};
use crate::skewprod::{height_skew, SkewPoint};
use crate::system::{DynamicalSystem, PolyMap2};
use crate::zfactor::factor;

/// Bound on the degree of any defining equation.
pub const DEFAULT_DEGREE_BUDGET: u64 = 4096;
/// Bound on the coefficient size of the elimination polynomial.
pub const ELIMINATION_BITS: u64 = 1 << 16;
const MAX_SHEAR_TRIES: i64 = 40;

/// Limits on the equations and the elimination polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub degree: u64,
    pub bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { degree: DEFAULT_DEGREE_BUDGET, bits: ELIMINATION_BITS }
    }
}

/// The conjugates of one point: coordinates are polynomials in a root of
/// the irreducible `point.field()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub point: AlgebraicPoint,
    /// Multiplicity of the field polynomial in the elimination polynomial.
    pub multiplicity: u32,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionVariety {
    pub dim: usize,
    /// Squarefree elimination polynomial in t = x + s y (t = x on a line).
    pub elimination: QPoly,
    pub shear: Q,
    pub components: Vec<Component>,
    /// Whether infinity solves the system (lines only).
    pub includes_infinity: bool,
}

impl SolutionVariety {
    /// Number of affine points over Q-bar.
    pub fn count(&self) -> usize {
        self.components.iter().map(|c| c.point.degree()).sum()
    }

    pub fn rational_points(&self) -> Vec<Vec<Q>> {
        let mut pts: Vec<Vec<Q>> = self.components.iter().filter_map(|c| c.point.as_rational()).collect();
        pts.sort();
        pts
    }

    pub fn all_verified(&self) -> bool {
        self.components.iter().all(|c| c.verified)
    }
}

enum Equations {
    Line { eqs: Vec<QPoly>, infinity: bool },
    Plane(Vec<QPoly2>),
}

fn check_degree(d: u64, m: usize, budget: u64) -> Result<()> {
    let deg = (0..m).try_fold(1u64, |acc, _| acc.checked_mul(d)).unwrap_or(u64::MAX);
    if deg > budget {
        return Err(Error::DegreeBudgetExceeded { degree: deg, budget });
    }
    Ok(())
}

fn iterate_p1(f: &RationalMapP1, m: usize) -> RationalMapP1 {
    (1..m).fold(f.clone(), |acc, _| f.compose(&acc))
}

fn iterate_plane(f: &PolyMap2, m: usize) -> PolyMap2 {
    (1..m).fold(f.clone(), |acc, _| f.compose(&acc))
}

fn as_p1(f: &DynamicalSystem) -> Option<&RationalMapP1> {
    match f {
        DynamicalSystem::P1(g) => Some(g),
        DynamicalSystem::Split(s) if s.components().len() == 1 => Some(&s.components()[0]),
        _ => None,
    }
}

/// F^m - C = 0 in the ambient space of F.
fn equalizer_equations(f: &DynamicalSystem, m: usize, c: &DynamicalSystem, budget: u64) -> Result<Equations> {
    if m == 0 {
        return Err(Error::InvalidInput("iterate count must be positive".into()));
    }
    check_degree(f.degree(), m, budget)?;
    if let (Some(fp1), Some(cp1)) = (as_p1(f), as_p1(c)) {
        let fm = iterate_p1(fp1, m);
        let eq = &(fm.num() * cp1.den()) - &(cp1.num() * fm.den());
        let infinity = fm.eval(&P1Point::Infinity) == cp1.eval(&P1Point::Infinity);
        return Ok(Equations::Line { eqs: vec![eq], infinity });
    }
    let (Some(fp2), Some(cp2)) = (f.as_poly_map2(), c.as_poly_map2()) else {
        return Err(Error::Unsupported(format!("equalizers of {} against {}", f.kind(), c.kind())));
    };
    let fm = iterate_plane(&fp2, m);
    Ok(Equations::Plane(vec![&fm.f[0] - &cp2.f[0], &fm.f[1] - &cp2.f[1]]))
}

pub fn solve_equalizer(f: &DynamicalSystem, m: usize, c: &DynamicalSystem) -> Result<SolutionVariety> {
    solve_equalizer_with(f, m, c, Budget::default())
}

pub fn solve_equalizer_with(f: &DynamicalSystem, m: usize, c: &DynamicalSystem, budget: Budget) -> Result<SolutionVariety> {
    match equalizer_equations(f, m, c, budget.degree)? {
        Equations::Line { eqs, infinity } => solve_line_with(&eqs, infinity, budget.bits),
        Equations::Plane(eqs) => solve_plane_with(&eqs, budget.bits),
    }
}

pub fn solve_common(f: &DynamicalSystem, g: &DynamicalSystem, c: &DynamicalSystem, m: usize, n: usize) -> Result<SolutionVariety> {
    solve_common_with(f, g, c, m, n, Budget::default())
}

pub fn solve_common_with(
    f: &DynamicalSystem,
    g: &DynamicalSystem,
    c: &DynamicalSystem,
    m: usize,
    n: usize,
    budget: Budget,
) -> Result<SolutionVariety> {
    match (equalizer_equations(f, m, c, budget.degree)?, equalizer_equations(g, n, c, budget.degree)?) {
        (Equations::Line { eqs: a, infinity: ia }, Equations::Line { eqs: b, infinity: ib }) => {
            solve_line_with(&[a, b].concat(), ia && ib, budget.bits)
        }
        (Equations::Plane(a), Equations::Plane(b)) => solve_plane_with(&[a, b].concat(), budget.bits),
        _ => Err(Error::InvalidInput("F and G act on different spaces".into())),
    }
}

fn check_bits(r: &QPoly, budget_bits: u64) -> Result<()> {
    if r.coeffs().iter().map(bits).max().unwrap_or(0) > budget_bits {
        return Err(Error::CoefficientBlowup { budget_bits });
    }
    Ok(())
}

/// Common roots of univariate equations.
pub fn solve_line(eqs: &[QPoly], includes_infinity: bool) -> Result<SolutionVariety> {
    solve_line_with(eqs, includes_infinity, ELIMINATION_BITS)
}

fn solve_line_with(eqs: &[QPoly], includes_infinity: bool, budget_bits: u64) -> Result<SolutionVariety> {
    let r = eqs.iter().filter(|e| !e.is_zero()).fold(None::<QPoly>, |acc, e| Some(acc.map_or_else(|| e.clone(), |a| a.gcd(e))));
    let Some(r) = r else {
        return Err(Error::PositiveDimensional);
    };
    check_bits(&r, budget_bits)?;
    let mut components = Vec::new();
    for (fac, mult) in factor(&r) {
        let k = NumberField::new(&fac);
        let theta = k.generator();
        let verified = eqs.iter().all(|e| e.compose(&theta).rem(&fac).is_zero());
        components.push(Component { point: AlgebraicPoint::new(&fac, vec![theta])?, multiplicity: mult, verified });
    }
    Ok(SolutionVariety { dim: 1, elimination: r.squarefree_part().monic(), shear: Q::zero(), components, includes_infinity })
}

fn shears() -> impl Iterator<Item = Q> {
    (0..=2 * MAX_SHEAR_TRIES).map(|k| Q::from_integer(if k % 2 == 0 { (-(k / 2)).into() } else { ((k + 1) / 2).into() }))
}

/// e(x, y) at a point of K^2.
fn eval_in_field(k: &NumberField, e: &QPoly2, x: &QPoly, y: &QPoly) -> QPoly {
    let mut acc = k.zero();
    for c in e.y_coeffs().iter().rev() {
        let cx = fp::eval(k, &fp::from_qpoly(k, c), x);
        acc = k.add(&k.mul(&acc, y), &cx);
    }
    acc
}

enum FiberOutcome {
    Point(QPoly),
    Empty,
    NotSeparated,
}

/// The y-coordinate over Q[t]/(r) when the fiber is a single point.
fn fiber_point(k: &NumberField, sheared: &[QPoly2]) -> Result<FiberOutcome> {
    let mut g: Vec<QPoly> = Vec::new();
    for e in sheared {
        let ey: Vec<QPoly> = fp::trim(k, e.y_coeffs().iter().map(|c| k.reduce(c)).collect());
        g = fp::gcd(k, &g, &ey);
    }
    if g.is_empty() {
        return Err(Error::PositiveDimensional);
    }
    if fp::degree(&g) == 0 {
        return Ok(FiberOutcome::Empty);
    }
    let dg: Vec<QPoly> = fp::trim(k, (1..g.len()).map(|i| k.mul(&g[i], &k.from_q(&Q::from_integer((i as i64).into())))).collect());
    let common = fp::gcd(k, &g, &dg);
    let sqf = fp::divrem(k, &g, &common).unwrap().0;
    match fp::degree(&sqf) {
        0 => Ok(FiberOutcome::Empty),
        1 => {
            let sqf = fp::monic(k, &sqf);
            Ok(FiberOutcome::Point(k.neg(&sqf[0])))
        }
        _ => Ok(FiberOutcome::NotSeparated),
    }
}

/// Common zeros of bivariate equations; errors if a curve lies in the zero set.
pub fn solve_plane(eqs: &[QPoly2]) -> Result<SolutionVariety> {
    solve_plane_with(eqs, ELIMINATION_BITS)
}

fn solve_plane_with(eqs: &[QPoly2], budget_bits: u64) -> Result<SolutionVariety> {
    let eqs: Vec<QPoly2> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.is_empty() {
        return Err(Error::PositiveDimensional);
    }
    'shear: for s in shears() {
        let sub_x = &QPoly2::x() - &QPoly2::y().scale(&s);
        let sheared: Vec<QPoly2> = eqs.iter().map(|e| e.compose(&sub_x, &QPoly2::y())).collect();
        let (free, dep): (Vec<&QPoly2>, Vec<&QPoly2>) = sheared.iter().partition(|e| e.deg_y() == 0);
        let mut r: Option<QPoly> = None;
        let mut push = |p: QPoly| {
            if !p.is_zero() {
                r = Some(r.take().map_or_else(|| p.clone(), |a| a.gcd(&p)));
            }
        };
        for e in &free {
            push(e.y_coeff(0));
        }
        for i in 0..dep.len() {
            for j in i + 1..dep.len() {
                push(resultant_y(dep[i], dep[j]));
            }
        }
        let Some(r) = r else {
            return Err(Error::PositiveDimensional);
        };
        check_bits(&r, budget_bits)?;
        let mut components = Vec::new();
        for (fac, mult) in factor(&r) {
            let k = NumberField::new(&fac);
            let theta = k.generator();
            let y = match fiber_point(&k, &sheared)? {
                FiberOutcome::Point(y) => y,
                FiberOutcome::Empty => continue,
                FiberOutcome::NotSeparated => continue 'shear,
            };
            let x = k.sub(&theta, &k.mul(&k.from_q(&s), &y));
            let verified = eqs.iter().all(|e| eval_in_field(&k, e, &x, &y).is_zero());
            components.push(Component { point: AlgebraicPoint::new(&fac, vec![x, y])?, multiplicity: mult, verified });
        }
        return Ok(SolutionVariety { dim: 2, elimination: r.squarefree_part().monic(), shear: s, components, includes_infinity: false });
    }
    Err(Error::PrecisionExhausted("no separating shear found".into()))
}

/// One row of the small-height table.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub m: usize,
    pub count: usize,
    pub max_height: f64,
    pub max_error: f64,
    /// d^m times the largest height.
    pub dm_times_max: f64,
    /// (d^m - deg C) times the largest height.
    pub normalized: f64,
}

/// Canonical height of a solver component under F.
pub fn component_height(f: &DynamicalSystem, pt: &AlgebraicPoint, tol: f64) -> Result<HeightValue> {
    match f {
        DynamicalSystem::P1(g) => match pt.as_rational() {
            Some(v) => canonical_height_p1(g, &P1Point::Finite(v[0].clone()), tol),
            None => canonical_height_p1_algebraic(g, &AlgebraicNumber::new(pt.field(), 0)?, tol),
        },
        DynamicalSystem::Skew(s) => height_skew(s, &SkewPoint::Algebraic(pt.clone()), tol),
        DynamicalSystem::Split(s) => {
            let mut h = HeightValue::zero();
            let n = s.components().len();
            for (i, c) in s.components().iter().enumerate() {
                let hi = match pt.as_rational() {
                    Some(v) => canonical_height_p1(c, &P1Point::Finite(v[i].clone()), tol / n as f64)?,
                    None => {
                        let minpoly = pt.charpoly(i).squarefree_part();
                        canonical_height_p1_algebraic(c, &AlgebraicNumber::new(&minpoly, 0)?, tol / n as f64)?
                    }
                };
                h = h.add(&hi);
            }
            Ok(h)
        }
        DynamicalSystem::Henon(h) => match pt.as_rational() {
            Some(v) => Ok(canonical_heights_henon(h, &[v[0].clone(), v[1].clone()], tol)?.htilde),
            None => Err(Error::Unsupported("Henon heights of algebraic points".into())),
        },
        DynamicalSystem::Poly2(_) => Err(Error::Unsupported("canonical heights for general polynomial maps".into())),
    }
}

pub fn height_decay_report(f: &DynamicalSystem, c: &DynamicalSystem, ms: &[usize], tol: f64) -> Result<Vec<DecayRow>> {
    let d = f.degree() as f64;
    let dc = c.degree() as f64;
    let mut rows = Vec::new();
    for &m in ms {
        let sol = solve_equalizer(f, m, c)?;
        let (mut best, mut err) = (0.0f64, 0.0f64);
        for comp in &sol.components {
            let h = component_height(f, &comp.point, tol)?;
            if h.total() > best {
                best = h.total();
                err = h.error_bound();
            }
        }
        let dm = d.powi(m as i32);
        rows.push(DecayRow { m, count: sol.count(), max_height: best, max_error: err, dm_times_max: dm * best, normalized: (dm - dc) * best });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCell {
    pub m: usize,
    pub n: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFinding {
    pub degree: usize,
    /// A basis of the curves of that degree through every point.
    pub basis: Vec<QPoly2>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub cells: Vec<DensityCell>,
    /// Distinct points over all cells.
    pub total_points: usize,
    /// None when no curve of degree <= the cap passes through every point.
    pub curve: Option<CurveFinding>,
}

fn monomials(deg: usize) -> Vec<(usize, usize)> {
    (0..=deg).flat_map(|t| (0..=t).map(move |j| (t - j, j))).collect()
}

/// Basis of the right nullspace of a rational matrix.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..ncols {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Q::zero(); ncols];
            v[fc] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][fc].clone();
            }
            v
        })
        .collect()
}

fn point_key(pt: &AlgebraicPoint) -> Vec<Vec<(i64, i64)>> {
    let mut out: Vec<Vec<(i64, i64)>> = pt
        .conjugate_values()
        .into_iter()
        .map(|vals| vals.into_iter().map(|(z, _)| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)).collect())
        .collect();
    out.sort();
    out
}

pub fn density_report(
    f: &DynamicalSystem,
    g: &DynamicalSystem,
    c: &DynamicalSystem,
    ms: &[usize],
    ns: &[usize],
    curve_degree_cap: usize,
) -> Result<DensityReport> {
    let mut cells = Vec::new();
    let mut comps: Vec<AlgebraicPoint> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut dim = 1;
    for &m in ms {
        for &n in ns {
            let sol = solve_common(f, g, c, m, n)?;
            dim = sol.dim;
            cells.push(DensityCell { m, n, count: sol.count() });
            for comp in sol.components {
                if seen.insert(point_key(&comp.point)) {
                    comps.push(comp.point);
                }
            }
        }
    }
    let total_points = comps.iter().map(|p| p.degree()).sum();
    if dim != 2 || comps.is_empty() {
        return Ok(DensityReport { cells, total_points, curve: None });
    }
    for deg in 1..=curve_degree_cap {
        let mons = monomials(deg);
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for pt in &comps {
            let k = NumberField::new(pt.field());
            let (x, y) = (&pt.coords()[0], &pt.coords()[1]);
            let vals: Vec<QPoly> = mons.iter().map(|&(i, j)| k.mul(&k.pow(x, i as i64).unwrap(), &k.pow(y, j as i64).unwrap())).collect();
            for t in 0..pt.degree() {
                rows.push(vals.iter().map(|v| v.coeff(t)).collect());
            }
        }
        let ns = nullspace(&rows, mons.len());
        if ns.is_empty() {
            continue;
        }
        let basis: Vec<QPoly2> = ns
            .iter()
            .map(|v| QPoly2::from_terms(&mons.iter().zip(v).map(|(&(i, j), a)| (i, j, a.clone())).collect::<Vec<_>>()))
            .collect();
        let verified = basis.iter().all(|b| {
            comps.iter().all(|pt| {
                let k = NumberField::new(pt.field());
                eval_in_field(&k, b, &pt.coords()[0], &pt.coords()[1]).is_zero()
            })
        });
        return Ok(DensityReport { cells, total_points, curve: Some(CurveFinding { degree: deg, basis, verified }) });
    }
    Ok(DensityReport { cells, total_points, curve: None })
}

/// Reference laws for period-point distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    /// Uniform in angle on the unit circle.
    Circle,
    /// Density 1 / (pi sqrt(4 - x^2)) on [-2, 2].
    Arcsine,
    /// Point mass.
    Dirac(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub center: f64,
    pub empirical: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquidistReport {
    /// Period points counted in P^1, with multiplicity one each.
    pub points: usize,
    pub includes_infinity: bool,
    /// Kolmogorov-Smirnov distance; mass off the support counts fully.
    pub ks: f64,
    pub off_support_mass: f64,
    pub histogram: Vec<HistogramBin>,
}

/// (P, P', rounding) for P = X_n - x Z_n, up to a common factor, where
/// (X_n, Z_n) is the n-th homogeneous iterate of (x, 1).
fn period_eval(num: &[Complex64], den: &[Complex64], d: usize, n: usize, z: Complex64) -> (Complex64, Complex64, f64) {
    let hom = |c: &[Complex64], x: Complex64, w: Complex64| {
        // sum c_i x^i w^{d-i} and its partials
        let (mut v, mut dx, mut dw) = (Complex64::zero(), Complex64::zero(), Complex64::zero());
        for (i, a) in c.iter().enumerate() {
            if *a == Complex64::zero() {
                continue;
            }
            let e = d - i;
            let xi = x.powu(i as u32);
            let we = w.powu(e as u32);
            v += a * xi * we;
            if i > 0 {
                dx += a * (i as f64) * x.powu(i as u32 - 1) * we;
            }
            if e > 0 {
                dw += a * (e as f64) * xi * w.powu(e as u32 - 1);
            }
        }
        (v, dx, dw)
    };
    let (mut x, mut w) = (z, Complex64::new(1.0, 0.0));
    let (mut dx, mut dw) = (Complex64::new(1.0, 0.0), Complex64::zero());
    for _ in 0..n {
        let (a, ax, aw) = hom(num, x, w);
        let (b, bx, bw) = hom(den, x, w);
        let (ndx, ndw) = (ax * dx + aw * dw, bx * dx + bw * dw);
        let s = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
        x = a / s;
        w = b / s;
        dx = ndx / s;
        dw = ndw / s;
    }
    let p = x - z * w;
    let dp = dx - w - z * dw;
    let err = 16.0 * f64::EPSILON * (n as f64 + 1.0) * (x.norm() + z.norm() * w.norm());
    (p, dp, err)
}

/// All period-n points of f in P^1 (roots of f^n(x) = x) with inclusion discs.
pub fn periodic_points(f: &RationalMapP1, n: usize) -> Result<(Vec<RootDisc>, bool)> {
    let d = f.degree();
    check_degree(d as u64, n, 1 << 14)?;
    let mut pt = P1Point::Infinity;
    for _ in 0..n {
        pt = f.eval(&pt);
    }
    let at_inf = pt == P1Point::Infinity;
    let total = d.pow(n as u32) + 1;
    let affine = total - usize::from(at_inf);
    let to_c = |p: &QPoly| -> Vec<Complex64> { (0..=d).map(|i| Complex64::new(crate::rational::to_f64(&p.coeff(i)), 0.0)).collect() };
    let (num, den) = (to_c(f.num()), to_c(f.den()));
    let eval = |z: Complex64| period_eval(&num, &den, d, n, z);
    let roots = aberth(affine, eval, 1.0, 1000)?;
    if !discs_disjoint(&roots) || roots.iter().any(|r| !r.radius.is_finite() || r.radius > 1e-6) {
        return Err(Error::RootIsolationFailure(format!("could not separate the {affine} period-{n} points")));
    }
    Ok((roots, at_inf))
}

fn arcsine_cdf(x: f64) -> f64 {
    0.5 + (x / 2.0).clamp(-1.0, 1.0).asin() / PI
}

pub fn equidistribution_check(f: &RationalMapP1, n: usize, law: Law) -> Result<EquidistReport> {
    let (roots, at_inf) = periodic_points(f, n)?;
    let total = roots.len() + usize::from(at_inf);
    let nt = total as f64;
    const SUPPORT_TOL: f64 = 1e-6;
    const BINS: usize = 32;
    if let Law::Dirac(c) = law {
        let hits = roots.iter().filter(|r| (r.center - c).norm() <= 1e-9).count();
        let off = 1.0 - hits as f64 / nt;
        return Ok(EquidistReport { points: total, includes_infinity: at_inf, ks: off, off_support_mass: off, histogram: Vec::new() });
    }
    // Statistic u in [0, 1] under which the reference law is uniform.
    let stat = |z: Complex64| -> Option<f64> {
        match law {
            Law::Circle => ((z.norm() - 1.0).abs() <= SUPPORT_TOL).then(|| z.arg().rem_euclid(2.0 * PI) / (2.0 * PI)),
            Law::Arcsine => (z.im.abs() <= SUPPORT_TOL && z.re.abs() <= 2.0 + SUPPORT_TOL).then(|| arcsine_cdf(z.re)),
            Law::Dirac(_) => unreachable!(),
        }
    };
    let mut us: Vec<f64> = roots.iter().filter_map(|r| stat(r.center)).collect();
    us.sort_by(f64::total_cmp);
    let off = 1.0 - us.len() as f64 / nt;
    let mut ks = off;
    for (i, u) in us.iter().enumerate() {
        ks = ks.max((i + 1) as f64 / nt - u).max(u - i as f64 / nt);
    }
    let mut histogram = Vec::with_capacity(BINS);
    for b in 0..BINS {
        let (lo, hi) = (b as f64 / BINS as f64, (b + 1) as f64 / BINS as f64);
        let (center, reference, count) = match law {
            Law::Circle => {
                let c = us.iter().filter(|&&u| u >= lo && (u < hi || (b == BINS - 1 && u <= hi))).count();
                ((lo + hi) * PI, hi - lo, c)
            }
            _ => {
                let (xa, xb) = (-2.0 + 4.0 * lo, -2.0 + 4.0 * hi);
                let c = roots
                    .iter()
                    .filter(|r| stat(r.center).is_some())
                    .filter(|r| {
                        let x = r.center.re.clamp(-2.0, 2.0);
                        x >= xa && (x < xb || (b == BINS - 1 && x <= xb))
                    })
                    .count();
                ((xa + xb) / 2.0, arcsine_cdf(xb) - arcsine_cdf(xa), c)
            }
        };
        histogram.push(HistogramBin { center, empirical: count as f64 / nt, reference });
    }
    Ok(EquidistReport { points: total, includes_infinity: at_inf, ks, off_support_mass: off, histogram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::skewprod::SkewProduct;

    fn power2() -> DynamicalSystem {
        DynamicalSystem::Skew(SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1))])).unwrap())
    }

    fn swapped() -> DynamicalSystem {
        DynamicalSystem::Poly2(PolyMap2::new(QPoly2::from_terms(&[(0, 2, qi(1))]), QPoly2::from_terms(&[(2, 0, qi(1))])))
    }

    fn id2() -> DynamicalSystem {
        DynamicalSystem::Poly2(PolyMap2::identity())
    }

    fn p1(c: &[i64]) -> DynamicalSystem {
        DynamicalSystem::P1(RationalMapP1::polynomial(QPoly::from_ints(c)).unwrap())
    }

    #[test]
    fn equalizer_examples() {
        let s = solve_equalizer(&power2(), 1, &id2()).unwrap();
        assert_eq!(s.count(), 4);
        assert_eq!(s.rational_points(), vec![vec![qi(0), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(0)], vec![qi(1), qi(1)]]);
        assert!(s.all_verified());
        let s = solve_equalizer(&power2(), 2, &id2()).unwrap();
        assert_eq!(s.count(), 16);
        assert!(s.all_verified());
        let s = solve_equalizer(&p1(&[0, 0, 1]), 1, &p1(&[1, 1])).unwrap();
        assert_eq!(s.count(), 2);
        assert_eq!(s.components[0].point.field(), &QPoly::from_ints(&[-1, -1, 1]));
    }

    #[test]
    fn common_examples() {
        let s = solve_common(&power2(), &swapped(), &id2(), 1, 1).unwrap();
        assert_eq!(s.rational_points(), vec![vec![qi(0), qi(0)], vec![qi(1), qi(1)]]);
        assert_eq!(s.count(), 2);
        let g = DynamicalSystem::Skew(SkewProduct::new(QPoly::from_ints(&[-2, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1)), (0, 0, qi(-2))])).unwrap());
        assert_eq!(solve_common(&power2(), &g, &id2(), 1, 1).unwrap().count(), 0);
        let a = solve_common(&power2(), &power2(), &id2(), 1, 1).unwrap();
        assert_eq!(a.rational_points(), solve_equalizer(&power2(), 1, &id2()).unwrap().rational_points());
    }

    #[test]
    fn curves_are_found() {
        // (0,0) and (1,1) lie on the line y = x
        let r = density_report(&power2(), &swapped(), &id2(), &[1], &[1], 3).unwrap();
        assert_eq!(r.total_points, 2);
        let c = r.curve.unwrap();
        assert_eq!((c.degree, c.verified), (1, true));
        assert_eq!(c.basis.len(), 1);
        assert!(c.basis[0].eval(&qi(5), &qi(5)).is_zero());
        let wide = density_report(&power2(), &swapped(), &id2(), &[1, 2], &[1, 2], 2).unwrap();
        assert_eq!(wide.cells.len(), 4);
        assert!(wide.total_points > 4);
        let empty = density_report(&power2(), &swapped(), &id2(), &[], &[], 3).unwrap();
        assert_eq!((empty.total_points, empty.curve), (0, None));
    }

    #[test]
    fn decay_for_doubling() {
        let rows = height_decay_report(&p1(&[0, 0, 1]), &p1(&[0, 2]), &[1, 2, 3], 1e-10).unwrap();
        for r in rows {
            assert!((r.normalized - 2f64.ln()).abs() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn nullspace_small() {
        let rows = vec![vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns, vec![vec![qi(1), qi(-1), qi(1)]]);
    }

    #[test]
    fn period_points_of_squaring() {
        let f = RationalMapP1::polynomial(QPoly::from_ints(&[0, 0, 1])).unwrap();
        let r = equidistribution_check(&f, 6, Law::Circle).unwrap();
        assert_eq!(r.points, 65);
        assert!(r.ks < 0.05, "{r:?}");
        let g = RationalMapP1::polynomial(QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let r = equidistribution_check(&g, 5, Law::Arcsine).unwrap();
        assert_eq!(r.points, 33);
        assert!(r.ks < 0.1, "{r:?}");
        let h = RationalMapP1::polynomial(QPoly::from_ints(&[0, 2, 1])).unwrap();
        let r = equidistribution_check(&h, 1, Law::Dirac(Complex64::new(-1.0, 0.0))).unwrap();
        assert!(r.ks < 0.7);
    }
}
