//! Polynomial classification under linear conjugacy and linear relatedness.
//!
//! Every polynomial of degree d >= 2 factors as f = L o M o R with L, R
//! linear, R a translation and M monic with no x^{d-1} term and M(0) = 0.
//! Linear relatedness, symmetry groups and normal forms all reduce to
//! scalings between such M.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fpoly::{fp, Field, NumberField};
use crate::poly::QPoly;
use crate::rational::{fmt_q, rational_root, Q};
use crate::zfactor::irreducible_factors;

/// x -> a x + b with a != 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Linear {
    pub a: Q,
    pub b: Q,
}

impl Linear {
    pub fn new(a: Q, b: Q) -> Self {
        assert!(!a.is_zero(), "linear map needs a != 0");
        Linear { a, b }
    }

    pub fn identity() -> Self {
        Linear::new(Q::one(), Q::zero())
    }

    pub fn scaling(a: Q) -> Self {
        Linear::new(a, Q::zero())
    }

    pub fn translation(b: Q) -> Self {
        Linear::new(Q::one(), b)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, x: &Q) -> Q {
        &self.a * x + &self.b
    }

    /// self o g.
    pub fn compose(&self, g: &Linear) -> Linear {
        Linear::new(&self.a * &g.a, &self.a * &g.b + &self.b)
    }

    pub fn inverse(&self) -> Linear {
        let ia = self.a.recip();
        Linear::new(ia.clone(), -&self.b * ia)
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::linear(self.a.clone(), self.b.clone())
    }

    /// self o p.
    pub fn after(&self, p: &QPoly) -> QPoly {
        &p.scale(&self.a) + &QPoly::constant(self.b.clone())
    }

    /// p o self.
    pub fn before(&self, p: &QPoly) -> QPoly {
        p.compose(&self.as_poly())
    }

    /// self o p o self^-1.
    pub fn conjugate(&self, p: &QPoly) -> QPoly {
        self.after(&self.inverse().before(p))
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_poly().display_var("x"))
    }
}

/// x -> a x + b with a, b in Q[t]/(m).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgLinear {
    pub field: QPoly,
    pub a: QPoly,
    pub b: QPoly,
}

impl fmt::Display for AlgLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*x + ({}) with t a root of {}", self.a.display_var("t"), self.b.display_var("t"), self.field.display_var("t"))
    }
}

/// A conjugator over Q or over a number field.
#[derive(Debug, Clone, PartialEq)]
pub enum Conjugator {
    Rational(Linear),
    Algebraic(AlgLinear),
}

impl fmt::Display for Conjugator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjugator::Rational(l) => write!(f, "{l}"),
            Conjugator::Algebraic(l) => write!(f, "{l}"),
        }
    }
}

/// T_d with T_d(u + 1/u) = u^d + u^-d.
pub fn chebyshev(d: usize) -> QPoly {
    let two = QPoly::constant(Q::from_integer(2.into()));
    let (mut prev, mut cur) = (two, QPoly::x());
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&QPoly::x() * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All l(x) = a x + b with l o f o l^-1 = g: rational solutions, and one
/// representative per Galois orbit of the solutions over number fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConjugationSolutions {
    pub rational: Vec<Linear>,
    pub algebraic: Vec<AlgLinear>,
}

impl ConjugationSolutions {
    pub fn is_empty(&self) -> bool {
        self.rational.is_empty() && self.algebraic.is_empty()
    }

    pub fn first(&self) -> Option<Conjugator> {
        self.rational
            .first()
            .cloned()
            .map(Conjugator::Rational)
            .or_else(|| self.algebraic.first().cloned().map(Conjugator::Algebraic))
    }
}

pub fn linear_conjugation_solve(f: &QPoly, g: &QPoly) -> Result<ConjugationSolutions> {
    let d = f.degree();
    if d < 2 || g.degree() != d {
        return Err(Error::InvalidInput("conjugation needs deg f = deg g >= 2".into()));
    }
    // a f(x) + b = g(a x + b): a^{d-1} = rho, then b is linear in a.
    let rho = f.lc() / g.lc();
    let mut out = ConjugationSolutions::default();
    let mut eq = vec![Q::zero(); d];
    eq[0] = -rho.clone();
    eq[d - 1] = Q::one();
    for m in irreducible_factors(&QPoly::new(eq)) {
        let k = NumberField::new(&m);
        let alpha = k.generator();
        let dq = Q::from_integer((d as i64).into());
        let num = k.sub(&k.mul(&alpha, &k.from_q(&f.coeff(d - 1))), &k.from_q(&(g.coeff(d - 1) * &rho)));
        let beta = k.mul(&num, &k.from_q(&(&dq * g.lc() * &rho).recip()));
        let lhs = fp::add(&k, &fp::scale(&k, &fp::from_qpoly(&k, f), &alpha), std::slice::from_ref(&beta));
        let rhs = fp::compose(&k, &fp::from_qpoly(&k, g), &fp::linear(&k, &alpha, &beta));
        if lhs != rhs {
            continue;
        }
        if m.degree() == 1 {
            let (a, b) = (k.as_rational(&alpha).unwrap(), k.as_rational(&beta).unwrap_or_else(|| beta.coeff(0)));
            out.rational.push(Linear::new(a, b));
        } else {
            out.algebraic.push(AlgLinear { field: k.modulus().clone(), a: alpha, b: beta });
        }
    }
    out.rational.sort();
    Ok(out)
}

/// f = L o M o R with R a translation, L(x) = lc(f) x + f(R^-1(0)), M monic,
/// centered, M(0) = 0.
#[derive(Debug, Clone, PartialEq)]
struct Decomposition {
    l: Linear,
    m: QPoly,
    r: Linear,
}

fn decompose(f: &QPoly) -> Decomposition {
    let d = f.degree();
    let s = f.coeff(d - 1) / (Q::from_integer((d as i64).into()) * f.lc());
    let r = Linear::translation(s.clone());
    let centered = r.inverse().before(f);
    let c0 = centered.coeff(0);
    let l = Linear::new(f.lc(), c0.clone());
    let m = l.inverse().after(&centered);
    Decomposition { l, m, r }
}

/// Exponents i < d with a nonzero coefficient in M.
fn lower_support(m: &QPoly) -> Vec<usize> {
    (0..m.degree()).filter(|&i| !m.coeff(i).is_zero()).collect()
}

/// f = l1 o g o l2 over Q, with the representative l2 = R_g^-1 o R_f when
/// both are related to a power map.
pub fn linearly_related(f: &QPoly, g: &QPoly) -> Result<Option<(Linear, Linear)>> {
    let d = f.degree();
    if d < 2 || g.degree() != d {
        return Err(Error::InvalidInput("linear relatedness needs deg f = deg g >= 2".into()));
    }
    let (df, dg) = (decompose(f), decompose(g));
    let sup = lower_support(&df.m);
    if sup != lower_support(&dg.m) {
        return Ok(None);
    }
    // M_f(x) = mu^-d M_g(mu x): coefficient i gives mu^{d-i} = n_g,i / n_f,i.
    let mut candidates = vec![Q::one(), -Q::one()];
    if let Some(&i) = sup.first() {
        let k = (d - i) as u32;
        let r = dg.m.coeff(i) / df.m.coeff(i);
        candidates = match rational_root(&r, k) {
            Some(root) if k % 2 == 0 => vec![root.clone(), -root],
            Some(root) => vec![root],
            None => vec![],
        };
    }
    for mu in candidates {
        let scale = Linear::scaling(mu.clone());
        let lam = Linear::scaling(num_traits::pow(mu.recip(), d));
        if lam.after(&scale.before(&dg.m)) != df.m {
            continue;
        }
        let l2 = dg.r.inverse().compose(&scale).compose(&df.r);
        let l1 = df.l.compose(&lam).compose(&dg.l.inverse());
        debug_assert_eq!(l1.after(&l2.before(g)), *f);
        return Ok(Some((l1, l2)));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecialVerdict {
    PowerConjugate(Conjugator),
    ChebyshevConjugate(Conjugator, i8),
    NotSpecial,
}

impl fmt::Display for SpecialVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialVerdict::PowerConjugate(l) => write!(f, "power-conjugate via l(x)={l}"),
            SpecialVerdict::ChebyshevConjugate(l, s) => {
                write!(f, "Chebyshev-conjugate via l(x)={l}, sign {}", if *s > 0 { "+" } else { "-" })
            }
            SpecialVerdict::NotSpecial => f.write_str("not special"),
        }
    }
}

/// Tests conjugacy to x^d, T_d and -T_d in that order (over Q-bar).
pub fn is_special(f: &QPoly) -> Result<SpecialVerdict> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::InvalidInput("classification needs deg f >= 2".into()));
    }
    if let Some(l) = linear_conjugation_solve(f, &QPoly::monomial(Q::one(), d))?.first() {
        return Ok(SpecialVerdict::PowerConjugate(l));
    }
    let t = chebyshev(d);
    if let Some(l) = linear_conjugation_solve(f, &t)?.first() {
        return Ok(SpecialVerdict::ChebyshevConjugate(l, 1));
    }
    if let Some(l) = linear_conjugation_solve(f, &-&t)?.first() {
        return Ok(SpecialVerdict::ChebyshevConjugate(l, -1));
    }
    Ok(SpecialVerdict::NotSpecial)
}

/// phi o f o phi^-1 = x^s h(x^t).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormXSHXT {
    pub s: usize,
    pub t: usize,
    pub h: QPoly,
    pub phi: Linear,
}

impl NormalFormXSHXT {
    pub fn expand(&self) -> QPoly {
        let ht = self.h.compose(&QPoly::monomial(Q::one(), self.t));
        &QPoly::monomial(Q::one(), self.s) * &ht
    }
}

fn xsht_of(g: &QPoly) -> (usize, usize, QPoly) {
    let s = g.ord_zero();
    let t = g.support().iter().map(|&e| e - s).fold(0usize, |a, b| a.gcd(&b));
    let h = QPoly::new((0..=(g.degree() - s) / t).map(|k| g.coeff(s + k * t)).collect());
    (s, t, h)
}

/// Centered form when it has t >= 2 (then it is forced); otherwise t = 1
/// with phi = id.
fn normal_form_unchecked(f: &QPoly) -> NormalFormXSHXT {
    let d = f.degree();
    let c = f.coeff(d - 1) / (Q::from_integer((d as i64).into()) * f.lc());
    let phi = Linear::translation(c);
    let g = phi.conjugate(f);
    let (s, t, h) = xsht_of(&g);
    if t >= 2 {
        return NormalFormXSHXT { s, t, h, phi };
    }
    let (s, _, _) = xsht_of(f);
    let h = QPoly::new(f.coeffs()[s..].to_vec());
    NormalFormXSHXT { s, t: 1, h, phi: Linear::identity() }
}

pub fn normal_form_xsht(f: &QPoly) -> Result<NormalFormXSHXT> {
    if f.degree() < 2 {
        return Err(Error::InvalidInput("normal form needs deg f >= 2".into()));
    }
    if lower_support(&decompose(f).m).is_empty() {
        return Err(Error::PowerMapDegenerate);
    }
    let nf = normal_form_unchecked(f);
    debug_assert_eq!(nf.phi.conjugate(f), nf.expand());
    Ok(nf)
}

/// G(f): all linear mu admitting a linear nu with nu o f = f o mu.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryGroup {
    AllScalings,
    /// A cyclic group of the given order over Q-bar: the maps
    /// x -> zeta (x - center) + center with zeta^order = 1. `rational`
    /// lists the elements defined over Q.
    Finite { order: usize, rational: Vec<Linear>, center: Q },
}

pub fn symmetry_group(f: &QPoly) -> Result<SymmetryGroup> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::InvalidInput("symmetry group needs deg f >= 2".into()));
    }
    let dec = decompose(f);
    let sup = lower_support(&dec.m);
    if sup.is_empty() {
        return Ok(SymmetryGroup::AllScalings);
    }
    let order = sup.iter().fold(0usize, |k, &i| k.gcd(&(d - i)));
    let mut rational = vec![Linear::identity()];
    if order % 2 == 0 {
        rational.push(dec.r.inverse().compose(&Linear::scaling(-Q::one())).compose(&dec.r));
    }
    Ok(SymmetryGroup::Finite { order, rational, center: -dec.r.b.clone() })
}

/// The nu with nu o f = f o mu, when it exists.
pub fn symmetry_partner(f: &QPoly, mu: &Linear) -> Option<Linear> {
    let fm = mu.before(f);
    let a = fm.lc() / f.lc();
    let b = fm.coeff(0) - &a * f.coeff(0);
    let nu = Linear::new(a, b);
    (nu.after(f) == fm).then_some(nu)
}

/// All linear mu with A = D o mu and C = mu^-1 o B.
pub fn ritt_first_step(a: &QPoly, c: &QPoly, d: &QPoly, b: &QPoly) -> Result<Vec<Linear>> {
    let n = a.degree();
    if n < 2 || d.degree() != n || c.degree() < 2 || b.degree() != c.degree() {
        return Err(Error::PreconditionViolated("degrees must match pairwise and be >= 2".into()));
    }
    if a.compose(c) != d.compose(b) {
        return Err(Error::PreconditionViolated("A o C differs from D o B".into()));
    }
    // D(alpha x + beta) = A: alpha^n = A_n / D_n, then beta from x^{n-1}.
    let r = a.lc() / d.lc();
    let alphas = match rational_root(&r, n as u32) {
        Some(x) if n % 2 == 0 => vec![x.clone(), -x],
        Some(x) => vec![x],
        None => vec![],
    };
    let nq = Q::from_integer((n as i64).into());
    let mut out = Vec::new();
    for alpha in alphas {
        let an1 = num_traits::pow(alpha.clone(), n - 1);
        let beta = (a.coeff(n - 1) - d.coeff(n - 1) * &an1) / (&nq * d.lc() * &an1);
        let mu = Linear::new(alpha, beta);
        if mu.before(d) == *a && mu.inverse().after(b) == *c {
            out.push(mu);
        }
    }
    out.sort();
    Ok(out)
}

/// phi o f o phi^-1 = eps1 R and phi o g o phi^-1 = eps2 R.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonNormalForm {
    pub phi: Linear,
    pub eps1: Q,
    pub eps2: Q,
    pub r: NormalFormXSHXT,
}

/// Searches with R the normal form of f, eps1 = 1 and eps2 = +-1 (the
/// rational t-th roots of unity).
pub fn common_normal_form(f: &QPoly, g: &QPoly) -> Result<Option<CommonNormalForm>> {
    let d = f.degree();
    if d < 2 || g.degree() != d {
        return Err(Error::InvalidInput("common normal form needs deg f = deg g >= 2".into()));
    }
    for p in [f, g] {
        if is_special(p)? != SpecialVerdict::NotSpecial {
            return Err(Error::SpecialInput);
        }
    }
    let nf = normal_form_unchecked(f);
    let r = nf.expand();
    let gc = nf.phi.conjugate(g);
    let mut signs = vec![Q::one()];
    if nf.t % 2 == 0 {
        signs.push(-Q::one());
    }
    for eps in signs {
        if gc == r.scale(&eps) {
            return Ok(Some(CommonNormalForm { phi: nf.phi.clone(), eps1: Q::one(), eps2: eps, r: nf }));
        }
    }
    Ok(None)
}

/// Human-readable classification line.
pub fn classify(f: &QPoly) -> Result<String> {
    let v = is_special(f)?;
    if v != SpecialVerdict::NotSpecial {
        return Ok(v.to_string());
    }
    let mut out = v.to_string();
    match normal_form_xsht(f) {
        Ok(nf) => out.push_str(&format!(
            "; normal form x^{} h(x^{}) with h(u) = {}, phi(x) = {}",
            nf.s,
            nf.t,
            nf.h.display_var("u"),
            nf.phi
        )),
        Err(Error::PowerMapDegenerate) => out.push_str("; linearly related to a power map"),
        Err(e) => return Err(e),
    }
    Ok(out)
}

pub fn fmt_linear_list(ls: &[Linear]) -> String {
    let parts: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Rational value of a linear coefficient as a string; used in tables.
pub fn fmt_coeffs(l: &Linear) -> (String, String) {
    (fmt_q(&l.a), fmt_q(&l.b))
}
