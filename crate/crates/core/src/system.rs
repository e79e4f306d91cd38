//! One enum over every map family, plus general polynomial self-maps of
//! A^2 used as comparison maps C in the equalizer solver.

use std::collections::BTreeSet;
use std::fmt;

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::henon::HenonMap;
use crate::p1dyn::{P1Point, RationalMapP1, SplitEndo};
use crate::places::primes_of;
use crate::poly::QPoly;
use crate::rational::Q;
use crate::skewprod::SkewProduct;

/// (x, y) -> (f1(x, y), f2(x, y)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMap2 {
    pub f: [QPoly2; 2],
}

impl PolyMap2 {
    pub fn new(f1: QPoly2, f2: QPoly2) -> Self {
        PolyMap2 { f: [f1, f2] }
    }

    pub fn identity() -> Self {
        Self::new(QPoly2::x(), QPoly2::y())
    }

    pub fn degree(&self) -> usize {
        self.f[0].total_degree().max(self.f[1].total_degree())
    }

    pub fn eval(&self, p: &[Q; 2]) -> [Q; 2] {
        [self.f[0].eval(&p[0], &p[1]), self.f[1].eval(&p[0], &p[1])]
    }

    /// self o g.
    pub fn compose(&self, g: &PolyMap2) -> PolyMap2 {
        PolyMap2::new(self.f[0].compose(&g.f[0], &g.f[1]), self.f[1].compose(&g.f[0], &g.f[1]))
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out = BTreeSet::new();
        for c in self.f.iter().flat_map(|p| p.coefficients()) {
            out.extend(primes_of(c.denom()));
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for PolyMap2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f[0], self.f[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicalSystem {
    P1(RationalMapP1),
    Split(SplitEndo),
    Henon(HenonMap),
    Skew(SkewProduct),
    Poly2(PolyMap2),
}

impl DynamicalSystem {
    pub fn kind(&self) -> &'static str {
        match self {
            DynamicalSystem::P1(_) => "p1",
            DynamicalSystem::Split(_) => "split",
            DynamicalSystem::Henon(_) => "henon",
            DynamicalSystem::Skew(_) => "skew",
            DynamicalSystem::Poly2(_) => "poly2",
        }
    }

    pub fn degree(&self) -> u64 {
        match self {
            DynamicalSystem::P1(f) => f.degree() as u64,
            DynamicalSystem::Split(f) => f.degree() as u64,
            DynamicalSystem::Henon(f) => f.degree(),
            DynamicalSystem::Skew(f) => f.degree() as u64,
            DynamicalSystem::Poly2(f) => f.degree() as u64,
        }
    }

    /// Number of affine coordinates of a point.
    pub fn dim(&self) -> usize {
        match self {
            DynamicalSystem::P1(_) => 1,
            DynamicalSystem::Split(f) => f.components().len(),
            _ => 2,
        }
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        match self {
            DynamicalSystem::P1(f) => f.bad_primes(),
            DynamicalSystem::Split(f) => f.bad_primes(),
            DynamicalSystem::Henon(f) => f.bad_primes(),
            DynamicalSystem::Skew(f) => f.bad_primes(),
            DynamicalSystem::Poly2(f) => f.bad_primes(),
        }
    }

    /// The map as a polynomial self-map of A^2, when it is one.
    pub fn as_poly_map2(&self) -> Option<PolyMap2> {
        match self {
            DynamicalSystem::Henon(h) => {
                let (a, b) = h.as_polys();
                Some(PolyMap2::new(a, b))
            }
            DynamicalSystem::Skew(s) => {
                let (a, b) = s.as_polys();
                Some(PolyMap2::new(a, b))
            }
            DynamicalSystem::Poly2(m) => Some(m.clone()),
            DynamicalSystem::Split(s) if s.components().len() == 2 => {
                let c = s.components();
                let (p0, p1) = (c[0].as_polynomial()?, c[1].as_polynomial()?);
                let sig = s.sigma().map_or([0, 1], |v| [v[0], v[1]]);
                let embed = |p: &QPoly, j: usize| if j == 0 { QPoly2::from_x(p) } else { QPoly2::from_y(p) };
                Some(PolyMap2::new(embed(p0, sig[0]), embed(p1, sig[1])))
            }
            _ => None,
        }
    }

    /// The map as a polynomial in one variable, when it is one.
    pub fn as_poly1(&self) -> Option<QPoly> {
        match self {
            DynamicalSystem::P1(f) => f.as_polynomial().cloned(),
            _ => None,
        }
    }

    /// self o g. Maps of one family compose within it; otherwise both
    /// sides must be polynomial maps of A^2.
    pub fn compose(&self, g: &DynamicalSystem) -> Result<DynamicalSystem> {
        use DynamicalSystem::*;
        Ok(match (self, g) {
            (P1(a), P1(b)) => P1(a.compose(b)),
            (Split(a), Split(b)) if a.sigma().is_none() && b.sigma().is_none() && a.components().len() == b.components().len() => {
                Split(SplitEndo::new(a.components().iter().zip(b.components()).map(|(x, y)| x.compose(y)).collect())?)
            }
            (Henon(a), Henon(b)) => Henon(a.compose(b)),
            (Skew(a), Skew(b)) if a.sigma().is_none() && b.sigma().is_none() => Skew(a.compose(b)),
            _ => match (self.as_poly_map2(), g.as_poly_map2()) {
                (Some(a), Some(b)) => Poly2(a.compose(&b)),
                _ => return Err(Error::InvalidInput(format!("cannot compose {} with {}", self.kind(), g.kind()))),
            },
        })
    }

    /// Exact equality as maps.
    pub fn same_map(&self, g: &DynamicalSystem) -> bool {
        match (self, g) {
            (DynamicalSystem::P1(a), DynamicalSystem::P1(b)) => a == b,
            (DynamicalSystem::Split(a), DynamicalSystem::Split(b)) => {
                a.components().len() == b.components().len() && (0..a.components().len()).all(|i| {
                    let ja = a.sigma().map_or(i, |s| s[i]);
                    let jb = b.sigma().map_or(i, |s| s[i]);
                    ja == jb && a.components()[i] == b.components()[i]
                })
            }
            _ => match (self.as_poly_map2(), g.as_poly_map2()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }

    /// Evaluation at an affine point; None when a coordinate goes to infinity.
    pub fn eval_affine(&self, x: &[Q]) -> Result<Option<Vec<Q>>> {
        if x.len() != self.dim() {
            return Err(Error::InvalidInput(format!("point has {} coordinates, map needs {}", x.len(), self.dim())));
        }
        let pts: Vec<P1Point> = x.iter().cloned().map(P1Point::Finite).collect();
        Ok(match self {
            DynamicalSystem::P1(f) => f.eval(&pts[0]).finite().map(|v| vec![v.clone()]),
            DynamicalSystem::Split(f) => f.eval(&pts).into_iter().map(|p| p.finite().cloned()).collect(),
            DynamicalSystem::Henon(f) => Some(f.eval(&[x[0].clone(), x[1].clone()]).to_vec()),
            DynamicalSystem::Skew(f) => Some(f.eval(&[x[0].clone(), x[1].clone()]).to_vec()),
            DynamicalSystem::Poly2(f) => Some(f.eval(&[x[0].clone(), x[1].clone()]).to_vec()),
        })
    }
}

impl fmt::Display for DynamicalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicalSystem::P1(m) => write!(f, "p1: {m}"),
            DynamicalSystem::Split(s) => {
                let parts: Vec<String> = s.components().iter().map(|c| c.to_string()).collect();
                write!(f, "split: {}", parts.join("; "))
            }
            DynamicalSystem::Henon(h) => {
                let parts: Vec<String> = h
                    .factors()
                    .iter()
                    .map(|fa| format!("P = {}, delta = {}", fa.p.display_var("y"), crate::rational::fmt_q(&fa.delta)))
                    .collect();
                write!(f, "henon: {}", parts.join("; "))
            }
            DynamicalSystem::Skew(s) => write!(f, "skew: p = {}; q = {}", s.p(), s.q()),
            DynamicalSystem::Poly2(m) => write!(f, "poly2: {}; {}", m.f[0], m.f[1]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{bad_places, Place};
    use crate::rational::{q, qi};

    #[test]
    fn bad_place_examples() {
        let h = DynamicalSystem::Henon(HenonMap::simple(QPoly::from_ints(&[0, 0, 1]), qi(1)).unwrap());
        assert_eq!(bad_places(&h), BTreeSet::from([Place::Archimedean]));
        let f = DynamicalSystem::P1(RationalMapP1::polynomial(QPoly::new(vec![q(-1, 2), qi(0), qi(1)])).unwrap());
        assert_eq!(bad_places(&f), BTreeSet::from([Place::Archimedean, Place::Finite(2)]));
        let s = SkewProduct::new(QPoly::from_ints(&[0, 0, 1]), QPoly2::from_terms(&[(0, 2, qi(1))])).unwrap();
        assert_eq!(bad_places(&DynamicalSystem::Skew(s)), BTreeSet::from([Place::Archimedean]));
    }

    #[test]
    fn compose_and_compare() {
        let sq = QPoly::from_ints(&[0, 0, 1]);
        let f = DynamicalSystem::Skew(SkewProduct::new(sq.clone(), QPoly2::from_terms(&[(0, 2, qi(1))])).unwrap());
        let g = DynamicalSystem::Skew(SkewProduct::new(sq, QPoly2::from_terms(&[(0, 2, qi(-1))])).unwrap());
        let gg = g.compose(&g).unwrap();
        let gf = g.compose(&f).unwrap();
        assert!(gg.same_map(&gf));
        assert!(!gg.same_map(&f.compose(&f).unwrap()));
        assert_eq!(gg.eval_affine(&[qi(2), qi(3)]).unwrap().unwrap(), vec![qi(16), qi(-81)]);
    }
}
