//! Map-spec and point strings.
//!
//! ```text
//! p1: x^2 - 29/16            (or just "x^2 - 29/16"; "num / den" for rational maps)
//! split: x^2; x^2 - 1        (optional "; sigma = [1, 0]")
//! henon: P = y^2 + 1, delta = -1/2; P = y^3, delta = 2
//! skew: p = x^2 - 1; q = y^2 + x*y - 3/4; sigma = [[1,0],[0,1]],[0,0]
//! poly2: x + y; 2*x*y
//! ```
//!
//! Expressions allow +, -, *, /, ^ with a nonnegative integer exponent,
//! parentheses, implicit multiplication ("2x^2", "3(x+1)") and exact
//! rational literals. Errors carry the character offset in the full input.

use num_bigint::BigInt;
use num_traits::One;

use crate::bipoly::QPoly2;
use crate::error::{Error, Result};
use crate::henon::{HenonFactor, HenonMap};
use crate::p1dyn::{P1Point, RationalMapP1, SplitEndo};
use crate::poly::QPoly;
use crate::rational::{fmt_q, Q};
use crate::skewprod::{Affine2, SkewProduct};
use crate::system::{DynamicalSystem, PolyMap2};

/// A quotient of bivariate polynomials; only the parser builds these.
#[derive(Debug, Clone)]
struct Frac {
    num: QPoly2,
    den: QPoly2,
}

impl Frac {
    fn poly(p: QPoly2) -> Self {
        Frac { num: p, den: QPoly2::constant(Q::one()) }
    }

    fn constant_den(&self) -> Option<Q> {
        (self.den.total_degree() == 0).then(|| self.den.coeff(0, 0))
    }

    fn add(self, o: Frac) -> Frac {
        if let (Some(a), Some(b)) = (self.constant_den(), o.constant_den()) {
            return Frac::poly(&self.num.scale(&a.recip()) + &o.num.scale(&b.recip()));
        }
        Frac { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    fn neg(self) -> Frac {
        Frac { num: -&self.num, den: self.den }
    }

    fn mul(self, o: Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }.tidy()
    }

    fn div(self, o: Frac) -> Option<Frac> {
        if o.num.is_zero() {
            return None;
        }
        Some(Frac { num: &self.num * &o.den, den: &self.den * &o.num }.tidy())
    }

    fn pow(self, e: u32) -> Frac {
        let mut out = Frac::poly(QPoly2::constant(Q::one()));
        for _ in 0..e {
            out = out.mul(self.clone());
        }
        out
    }

    fn tidy(self) -> Frac {
        match self.constant_den() {
            Some(a) => Frac::poly(self.num.scale(&a.recip())),
            None => self,
        }
    }
}

struct Parser<'a> {
    field: &'a str,
    src: &'a [u8],
    pos: usize,
    offset: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.field, self.offset + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(t) } else { acc.add(t.neg()) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    acc = acc.div(f).ok_or_else(|| Error::parse(self.field, self.offset + at, "division by zero"))?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => acc = acc.mul(self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Frac> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.factor();
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::parse(self.field, self.offset + start, "exponent too large"))?;
            if e > 4096 {
                return Err(Error::parse(self.field, self.offset + start, "exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(Frac::poly(QPoly2::constant(Q::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| *v == name) {
                    Some(0) => Ok(Frac::poly(QPoly2::x())),
                    Some(_) => Ok(Frac::poly(QPoly2::y())),
                    None => Err(Error::parse(self.field, self.offset + start, format!("unknown variable `{name}`"))),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `s` (located at `offset` inside the field's full text) in the
/// given variables; the first maps to x, the second to y.
fn parse_frac(field: &str, s: &str, offset: usize, vars: &[&str]) -> Result<Frac> {
    let mut p = Parser { field, src: s.as_bytes(), pos: 0, offset, vars };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn parse_poly2_at(field: &str, s: &str, offset: usize, vars: &[&str]) -> Result<QPoly2> {
    let f = parse_frac(field, s, offset, vars)?;
    if f.constant_den().is_none() {
        return Err(Error::parse(field, offset, "expected a polynomial"));
    }
    Ok(f.tidy().num)
}

fn parse_poly1_at(field: &str, s: &str, offset: usize, var: &str) -> Result<QPoly> {
    Ok(parse_poly2_at(field, s, offset, &[var])?.as_x_poly().expect("single variable"))
}

/// A univariate polynomial in x.
pub fn parse_poly(field: &str, s: &str) -> Result<QPoly> {
    parse_poly1_at(field, s, 0, "x")
}

/// A bivariate polynomial in x, y.
pub fn parse_poly2(field: &str, s: &str) -> Result<QPoly2> {
    parse_poly2_at(field, s, 0, &["x", "y"])
}

fn parse_rational_map(field: &str, s: &str, offset: usize) -> Result<RationalMapP1> {
    let f = parse_frac(field, s, offset, &["x"])?;
    let (num, den) = (f.num.as_x_poly().unwrap(), f.den.as_x_poly().unwrap());
    let g = num.gcd(&den);
    let (num, den) = if g.degree() > 0 { (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap()) } else { (num, den) };
    RationalMapP1::new(num, den).map_err(|e| Error::parse(field, offset, e.to_string()))
}

/// Splits on `sep` outside brackets, returning (offset, piece).
fn split_top(s: &str, sep: u8) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn trimmed(off: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (off + lead, s.trim())
}

/// `name = value` with the expected name (case-insensitive).
fn keyed<'s>(field: &str, off: usize, s: &'s str, name: &str) -> Result<(usize, &'s str)> {
    let (off, s) = trimmed(off, s);
    let Some((k, v)) = s.split_once('=') else {
        return Err(Error::parse(field, off, format!("expected `{name} = ...`")));
    };
    if !k.trim().eq_ignore_ascii_case(name) {
        return Err(Error::parse(field, off, format!("expected `{name}`, found `{}`", k.trim())));
    }
    Ok(trimmed(off + k.len() + 1, v))
}

fn parse_rational_at(field: &str, off: usize, s: &str) -> Result<Q> {
    let f = parse_frac(field, s, off, &[])?;
    Ok(f.tidy().num.coeff(0, 0))
}

/// Rationals inside `[a, b, ...]`.
fn parse_bracket_list(field: &str, off: usize, s: &str) -> Result<Vec<(usize, String)>> {
    let (off, s) = trimmed(off, s);
    if !s.starts_with('[') || !s.ends_with(']') {
        return Err(Error::parse(field, off, "expected `[...]`"));
    }
    let inner = &s[1..s.len() - 1];
    Ok(split_top(inner, b',').into_iter().map(|(o, p)| (off + 1 + o, p.to_string())).collect())
}

fn parse_vec2(field: &str, off: usize, s: &str) -> Result<[Q; 2]> {
    let items = parse_bracket_list(field, off, s)?;
    if items.len() != 2 {
        return Err(Error::parse(field, off, "expected two entries"));
    }
    Ok([parse_rational_at(field, items[0].0, &items[0].1)?, parse_rational_at(field, items[1].0, &items[1].1)?])
}

/// `[[a,b],[c,d]],[e,f]`.
fn parse_affine(field: &str, off: usize, s: &str) -> Result<Affine2> {
    let parts = split_top(s, b',');
    if parts.len() != 2 {
        return Err(Error::parse(field, off, "sigma needs a matrix and a translation"));
    }
    let rows = parse_bracket_list(field, off + parts[0].0, parts[0].1)?;
    if rows.len() != 2 {
        return Err(Error::parse(field, off, "sigma matrix needs two rows"));
    }
    let m = [parse_vec2(field, rows[0].0, &rows[0].1)?, parse_vec2(field, rows[1].0, &rows[1].1)?];
    let t = parse_vec2(field, off + parts[1].0, parts[1].1)?;
    Ok(Affine2 { m, t })
}

fn wrap<T>(field: &str, off: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(field, off, other.to_string()),
    })
}

/// Parses a map spec; errors name `field`.
pub fn parse_map(field: &str, s: &str) -> Result<DynamicalSystem> {
    let (kind, body, boff) = match s.split_once(':') {
        Some((k, b)) => (k.trim().to_ascii_lowercase(), b, k.len() + 1),
        None => ("p1".to_string(), s, 0),
    };
    match kind.as_str() {
        "p1" => Ok(DynamicalSystem::P1(parse_rational_map(field, body, boff)?)),
        "split" => {
            let mut comps = Vec::new();
            let mut sigma = None;
            for (o, part) in split_top(body, b';') {
                let (o, part) = trimmed(boff + o, part);
                if part.to_ascii_lowercase().starts_with("sigma") {
                    let (vo, v) = keyed(field, o, part, "sigma")?;
                    let idx = parse_bracket_list(field, vo, v)?
                        .into_iter()
                        .map(|(io, t)| t.trim().parse::<usize>().map_err(|_| Error::parse(field, io, "expected an index")))
                        .collect::<Result<Vec<_>>>()?;
                    sigma = Some((vo, idx));
                } else {
                    comps.push(parse_rational_map(field, part, o)?);
                }
            }
            let mut f = wrap(field, boff, SplitEndo::new(comps))?;
            if let Some((vo, idx)) = sigma {
                f = wrap(field, vo, f.with_permutation(idx))?;
            }
            Ok(DynamicalSystem::Split(f))
        }
        "henon" => {
            let mut factors = Vec::new();
            for (o, part) in split_top(body, b';') {
                let pieces = split_top(part, b',');
                if pieces.len() != 2 {
                    return Err(Error::parse(field, boff + o, "expected `P = ..., delta = ...`"));
                }
                let (po, p) = keyed(field, boff + o + pieces[0].0, pieces[0].1, "P")?;
                let (dof, d) = keyed(field, boff + o + pieces[1].0, pieces[1].1, "delta")?;
                let p = parse_poly1_at(field, p, po, "y")?;
                let delta = parse_rational_at(field, dof, d)?;
                factors.push(wrap(field, boff + o, HenonFactor::new(p, delta))?);
            }
            Ok(DynamicalSystem::Henon(wrap(field, boff, HenonMap::new(factors))?))
        }
        "skew" => {
            let parts = split_top(body, b';');
            if parts.len() < 2 || parts.len() > 3 {
                return Err(Error::parse(field, boff, "expected `p = ...; q = ...[; sigma = ...]`"));
            }
            let (po, p) = keyed(field, boff + parts[0].0, parts[0].1, "p")?;
            let (qo, q) = keyed(field, boff + parts[1].0, parts[1].1, "q")?;
            let p = parse_poly1_at(field, p, po, "x")?;
            let q = parse_poly2_at(field, q, qo, &["x", "y"])?;
            let mut f = wrap(field, boff, SkewProduct::new(p, q))?;
            if let Some((so, s)) = parts.get(2) {
                let (vo, v) = keyed(field, boff + so, s, "sigma")?;
                f = wrap(field, vo, f.with_sigma(parse_affine(field, vo, v)?))?;
            }
            Ok(DynamicalSystem::Skew(f))
        }
        "poly2" => {
            let parts = split_top(body, b';');
            if parts.len() != 2 {
                return Err(Error::parse(field, boff, "expected two coordinate polynomials"));
            }
            let f1 = parse_poly2_at(field, parts[0].1, boff + parts[0].0, &["x", "y"])?;
            let f2 = parse_poly2_at(field, parts[1].1, boff + parts[1].0, &["x", "y"])?;
            Ok(DynamicalSystem::Poly2(PolyMap2::new(f1, f2)))
        }
        other => Err(Error::parse(field, 0, format!("unknown map kind `{other}`"))),
    }
}

/// A point: `1/4`, `inf`, `(1, 2)`, `(1/2, inf)`.
pub fn parse_point(field: &str, s: &str) -> Result<Vec<P1Point>> {
    let (off, t) = trimmed(0, s);
    if t.is_empty() {
        return Err(Error::parse(field, off, "empty point"));
    }
    let (off, inner) = if t.starts_with('(') {
        if !t.ends_with(')') {
            return Err(Error::parse(field, off + t.len(), "expected `)`"));
        }
        (off + 1, &t[1..t.len() - 1])
    } else {
        (off, t)
    };
    split_top(inner, b',')
        .into_iter()
        .map(|(o, c)| {
            let (o, c) = trimmed(off + o, c);
            if c.is_empty() {
                return Err(Error::parse(field, o, "empty coordinate"));
            }
            if c.eq_ignore_ascii_case("inf") {
                return Ok(P1Point::Infinity);
            }
            Ok(P1Point::Finite(parse_rational_at(field, o, c)?))
        })
        .collect()
}

/// Affine coordinates of a point; infinity is rejected.
pub fn parse_affine_point(field: &str, s: &str) -> Result<Vec<Q>> {
    parse_point(field, s)?
        .into_iter()
        .map(|p| p.finite().cloned().ok_or_else(|| Error::parse(field, 0, "point at infinity not allowed here")))
        .collect()
}

pub fn format_point(p: &[P1Point]) -> String {
    if p.len() == 1 {
        return p[0].to_string();
    }
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn format_affine(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_q).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

/// A spec string that parses back to the same map.
pub fn format_map(f: &DynamicalSystem) -> String {
    match f {
        DynamicalSystem::Skew(s) => {
            let mut out = format!("skew: p = {}; q = {}", s.p(), s.q());
            if let Some(a) = s.sigma() {
                let r = |v: &[Q; 2]| format!("[{},{}]", fmt_q(&v[0]), fmt_q(&v[1]));
                out.push_str(&format!("; sigma = [{},{}],{}", r(&a.m[0]), r(&a.m[1]), r(&a.t)));
            }
            out
        }
        DynamicalSystem::Split(s) => {
            let mut out = f.to_string();
            if let Some(sig) = s.sigma() {
                let idx: Vec<String> = sig.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("; sigma = [{}]", idx.join(",")));
            }
            out
        }
        _ => f.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("f", "2x^2-1").unwrap(), QPoly::from_ints(&[-1, 0, 2]));
        assert_eq!(parse_poly("f", "x^2 - 29/16").unwrap(), QPoly::new(vec![q(-29, 16), qi(0), qi(1)]));
        assert_eq!(parse_poly("f", "(x+1)^2").unwrap(), QPoly::from_ints(&[1, 2, 1]));
        assert_eq!(parse_poly("f", "-x^3 - x").unwrap(), QPoly::from_ints(&[0, -1, 0, -1]));
        assert_eq!(parse_poly("f", "3(x+1)/2").unwrap(), QPoly::new(vec![q(3, 2), q(3, 2)]));
        assert_eq!(parse_poly2("f", "y^2 + x*y - 3/4").unwrap(), QPoly2::from_terms(&[(0, 2, qi(1)), (1, 1, qi(1)), (0, 0, q(-3, 4))]));
    }

    #[test]
    fn maps() {
        let DynamicalSystem::P1(f) = parse_map("map", "p1: (x^2+1)/x").unwrap() else { panic!() };
        assert_eq!(f.eval(&P1Point::Finite(qi(0))), P1Point::Infinity);
        let DynamicalSystem::Henon(h) = parse_map("map", "henon: P = y^2 + 1, delta = -1/2; P = y^3, delta = 2").unwrap() else { panic!() };
        assert_eq!(h.factors().len(), 2);
        assert_eq!(h.factors()[0].delta, q(-1, 2));
        let s = parse_map("map", "skew: p = x^2 - 1; q = y^2 + x*y - 3/4; sigma = [[1,0],[0,1]],[0,0]").unwrap();
        assert_eq!(s.kind(), "skew");
        assert!(matches!(parse_map("map", "split: x^2; x^2-1").unwrap(), DynamicalSystem::Split(_)));
        assert!(matches!(parse_map("map", "poly2: x + y; 2x y").unwrap(), DynamicalSystem::Poly2(_)));
    }

    #[test]
    fn round_trip() {
        for s in [
            "p1: x^2 - 29/16",
            "p1: (x^2+1)/x",
            "split: x^2; x^2 - 1; sigma = [1,0]",
            "henon: P = y^2 + 1, delta = -1/2; P = 3/2*y^3, delta = 2",
            "skew: p = x^2 - 1; q = y^2 + x*y - 3/4; sigma = [[2,0],[1,1]],[1/2,0]",
            "poly2: x + y; 2*x*y - 1/3",
        ] {
            let f = parse_map("map", s).unwrap();
            let g = parse_map("map", &format_map(&f)).unwrap();
            assert_eq!(f, g, "{s} -> {}", format_map(&f));
        }
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("p", "1/4").unwrap(), vec![P1Point::Finite(q(1, 4))]);
        assert_eq!(parse_point("p", "inf").unwrap(), vec![P1Point::Infinity]);
        assert_eq!(parse_point("p", "(1, -2)").unwrap(), vec![P1Point::Finite(qi(1)), P1Point::Finite(qi(-2))]);
        let e = parse_point("point", "(1,,2)").unwrap_err();
        assert!(matches!(e, Error::Parse { ref field, pos: 3, .. } if field == "point"), "{e:?}");
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_map("map", "p1: x^2 + * 3").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 10, .. }), "{e:?}");
        let e = parse_map("map", "henon: P = y^2, delta = 0").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_map("map", "skew: p = x^2; q = x*y").unwrap_err();
        assert!(e.to_string().contains("not regular"), "{e}");
        assert!(matches!(parse_map("map", "p1: z^2").unwrap_err(), Error::Parse { pos: 4, .. }));
    }
}
