//! Relation search in the semigroup generated by two maps.
//!
//! Words are enumerated by (length, lexicographic with G < F). A pair is
//! tested only when the composite degrees agree, is pruned by evaluation at
//! a few seeded random points, and is confirmed by exact composition.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::heights::weil_height;
use crate::p1dyn::{is_preperiodic_p1, P1Point, RationalMapP1};
use crate::rational::{rational_box, Q};
use crate::system::DynamicalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    G,
    F,
}

/// w = [a, b, c] denotes a o b o c.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("words are nonempty".into()));
        }
        Ok(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let letters = inner
            .split(',')
            .enumerate()
            .map(|(i, t)| match t.trim() {
                "F" | "f" => Ok(Letter::F),
                "G" | "g" => Ok(Letter::G),
                other => Err(Error::parse("word", i, format!("unknown letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|l| if *l == Letter::F { "F" } else { "G" }).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Default bound on the degree of a composite.
pub const DEFAULT_MAX_DEGREE: u64 = 1 << 12;

fn word_degree(w: &Word, df: u64, dg: u64) -> Option<u64> {
    w.0.iter().try_fold(1u64, |acc, l| acc.checked_mul(if *l == Letter::F { df } else { dg }))
}

/// The exact composite of a word.
pub fn compose_word(w: &Word, f: &DynamicalSystem, g: &DynamicalSystem, max_degree: u64) -> Result<DynamicalSystem> {
    let deg = word_degree(w, f.degree(), g.degree()).unwrap_or(u64::MAX);
    if deg > max_degree {
        return Err(Error::DegreeBudgetExceeded { degree: deg, budget: max_degree });
    }
    let pick = |l: &Letter| if *l == Letter::F { f } else { g };
    let mut acc = pick(w.0.last().unwrap()).clone();
    for l in w.0.iter().rev().skip(1) {
        acc = pick(l).compose(&acc)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate {
    pub w1: Word,
    pub w2: Word,
    pub map: DynamicalSystem,
    /// Whether |w1| = |w2| (a relation in the equal-length sense).
    pub equal_length: bool,
    pub verified: bool,
}

fn eval_point(sys: &DynamicalSystem, x: &[P1Point]) -> Vec<P1Point> {
    match sys {
        DynamicalSystem::P1(f) => vec![f.eval(&x[0])],
        DynamicalSystem::Split(f) => f.eval(x),
        _ => {
            let aff: Option<Vec<Q>> = x.iter().map(|p| p.finite().cloned()).collect();
            match aff.and_then(|a| sys.eval_affine(&a).ok().flatten()) {
                Some(v) => v.into_iter().map(P1Point::Finite).collect(),
                None => x.to_vec(),
            }
        }
    }
}

fn all_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in [Letter::G, Letter::F] {
                let mut v: Vec<Letter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word));
        layer = next;
    }
    out
}

/// First relation w1 = w2 (w1 before w2 in the enumeration order) with
/// words of length <= max_len and matching degrees.
pub fn find_relation(f: &DynamicalSystem, g: &DynamicalSystem, max_len: usize, samples: usize) -> Result<Option<RelationCertificate>> {
    find_relation_with_budget(f, g, max_len, samples, DEFAULT_MAX_DEGREE)
}

pub fn find_relation_with_budget(
    f: &DynamicalSystem,
    g: &DynamicalSystem,
    max_len: usize,
    samples: usize,
    max_degree: u64,
) -> Result<Option<RelationCertificate>> {
    if f.dim() != g.dim() {
        return Err(Error::InvalidInput("maps act on spaces of different dimension".into()));
    }
    let (df, dg) = (f.degree(), g.degree());
    let words = all_words(max_len);
    for w in &words {
        let deg = word_degree(w, df, dg).unwrap_or(u64::MAX);
        if deg > max_degree {
            return Err(Error::DegreeBudgetExceeded { degree: deg, budget: max_degree });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xf7ee);
    let bound = 1i64 << 16;
    let points: Vec<Vec<P1Point>> = (0..samples)
        .map(|_| (0..f.dim()).map(|_| P1Point::Finite(Q::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))).collect())
        .collect();
    // Values of each word at the sample points, built from the value of its tail.
    let mut values: HashMap<Word, Vec<Vec<P1Point>>> = HashMap::new();
    for w in &words {
        let head = if w.0[0] == Letter::F { f } else { g };
        let inner = if w.len() == 1 { points.clone() } else { values[&Word(w.0[1..].to_vec())].clone() };
        values.insert(w.clone(), inner.iter().map(|x| eval_point(head, x)).collect());
    }
    let mut maps: HashMap<Word, DynamicalSystem> = HashMap::new();
    for (i, w1) in words.iter().enumerate() {
        for w2 in &words[i + 1..] {
            if word_degree(w1, df, dg) != word_degree(w2, df, dg) || values[w1] != values[w2] {
                continue;
            }
            for w in [w1, w2] {
                if !maps.contains_key(w) {
                    maps.insert(w.clone(), compose_word(w, f, g, max_degree)?);
                }
            }
            let (m1, m2) = (&maps[w1], &maps[w2]);
            if m1.same_map(m2) {
                return Ok(Some(RelationCertificate {
                    w1: w1.clone(),
                    w2: w2.clone(),
                    map: m1.clone(),
                    equal_length: w1.len() == w2.len(),
                    verified: true,
                }));
            }
        }
    }
    Ok(None)
}

/// Re-derives both composites and compares them exactly.
pub fn verify_relation(c: &RelationCertificate, f: &DynamicalSystem, g: &DynamicalSystem) -> Result<bool> {
    let a = compose_word(&c.w1, f, g, u64::MAX)?;
    let b = compose_word(&c.w2, f, g, u64::MAX)?;
    Ok(a.same_map(&b) && a.same_map(&c.map))
}

/// Points of P^1(Q) with |num|, den <= denominator_cutoff and Weil height
/// <= height_cutoff (plus infinity) that are preperiodic for both maps.
pub fn shared_preperiodic_points(f: &RationalMapP1, g: &RationalMapP1, height_cutoff: f64, denominator_cutoff: i64) -> Result<Vec<P1Point>> {
    if !(height_cutoff > 0.0) || denominator_cutoff < 1 {
        return Err(Error::InvalidInput("cutoffs must be positive".into()));
    }
    let mut out = Vec::new();
    let candidates = rational_box(denominator_cutoff, denominator_cutoff)
        .into_iter()
        .filter(|x| weil_height(x).total() <= height_cutoff + 1e-12)
        .map(P1Point::Finite)
        .chain(std::iter::once(P1Point::Infinity));
    for x in candidates {
        if is_preperiodic_p1(f, &x)?.preperiodic && is_preperiodic_p1(g, &x)?.preperiodic {
            out.push(x);
        }
    }
    Ok(out)
}
