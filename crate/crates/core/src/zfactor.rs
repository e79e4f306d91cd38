//! Factorization of polynomials over Q: squarefree decomposition, then
//! Cantor-Zassenhaus modulo a small prime, Hensel lifting and subset
//! recombination.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::intfactor::is_prime_u64;
use crate::poly::QPoly;
use crate::rational::Q;

/// Irreducible monic factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    for (g, mult) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, mult));
        }
    }
    out.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
    out
}

/// Distinct irreducible monic factors of a nonzero polynomial.
pub fn irreducible_factors(f: &QPoly) -> Vec<QPoly> {
    factor(f).into_iter().map(|(g, _)| g).collect()
}

pub fn is_irreducible(f: &QPoly) -> bool {
    let fs = factor(f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Yun's algorithm: f = c * prod g_i^i with g_i squarefree, coprime, monic.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    let f = f.monic();
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.div_exact(&a).unwrap();
    let mut c = df.div_exact(&a).unwrap();
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let mut out = Vec::new();
    let mut f = f.monic();
    // Pull out x first; it keeps the constant-term test meaningful.
    if f.coeff(0).is_zero() {
        out.push(QPoly::x());
        f = f.div_exact(&QPoly::x()).unwrap();
    }
    if f.degree() == 0 {
        return out;
    }
    if f.degree() == 1 {
        out.push(f);
        return out;
    }
    let ints = f.primitive_int();
    for g in zassenhaus(&ints) {
        out.push(QPoly::from_bigints(&g).monic());
    }
    out
}

// ---- arithmetic in F_p[x], p < 2^31, coefficients lowest degree first ----

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = egcd(a as i64, p as i64);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i64) as u64
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    trim(c)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let b = trim(b.clone());
    assert!(!b.is_empty());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * bi % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> Fp {
    let bp = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

/// Factors a monic squarefree polynomial over F_p (p odd) into monic irreducibles.
fn fp_factor(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    let mut rest = fp_monic(f, p);
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 0u32;
    let bp = BigUint::from(p);
    while rest.len() > 1 {
        i += 1;
        if 2 * i as usize > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = fp_powmod(&h, &bp, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, i as usize, p, rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
    }
    out
}

fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    let n = f.len() - 1;
    if n == d {
        out.push(fp_monic(f, p));
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let mut b = fp_powmod(&a, &e, f, p);
        if b.is_empty() {
            b = vec![p - 1];
        } else {
            b[0] = (b[0] + p - 1) % p;
        }
        let g = fp_gcd(&trim(b), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = fp_divrem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&other, d, p, rng, out);
            return;
        }
    }
}

// ---- Hensel lifting over Z/(m) with m = p^k ----

fn zm(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn z_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn z_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

/// Division by a monic polynomial modulo m.
fn zm_divrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let b = zm(b, m);
    let mut r = zm(a, m);
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = (&r[k + i] - &c * bi).mod_floor(m);
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (zm(&q, m), zm(&r, m))
}

fn fp_to_z(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Extended gcd over F_p: (s, t) with s*a + t*b = 1.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    (s0.iter().map(|&c| c * inv % p).collect(), t0.iter().map(|&c| c * inv % p).collect())
}

/// Lifts f = g*h (mod p), h monic, to a factorization mod p^k.
fn hensel_two(f: &[BigInt], g: &Fp, h: &Fp, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s, t) = fp_xgcd(g, h, p);
    let (mut g, mut h, mut s, mut t) = (fp_to_z(g), fp_to_z(h), fp_to_z(&s), fp_to_z(&t));
    let bp = BigInt::from(p);
    let target = bp.pow(k);
    let mut m = bp.clone();
    while m < target {
        m = &m * &m;
        let e = zm(&z_sub(f, &z_mul(&g, &h)), &m);
        let (q, r) = zm_divrem(&z_mul(&s, &e), &h, &m);
        let g2 = zm(&z_add(&z_add(&g, &z_mul(&t, &e)), &z_mul(&q, &g)), &m);
        let h2 = zm(&z_add(&h, &r), &m);
        let mut b = z_sub(&z_add(&z_mul(&s, &g2), &z_mul(&t, &h2)), &[BigInt::one()]);
        b = zm(&b, &m);
        let (c, d) = zm_divrem(&z_mul(&s, &b), &h2, &m);
        let s2 = zm(&z_sub(&s, &d), &m);
        let t2 = zm(&z_sub(&z_sub(&t, &z_mul(&t, &b)), &z_mul(&c, &g2)), &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
    }
    (zm(&g, &target), zm(&h, &target))
}

/// Lifts the monic modular factors of f to monic factors mod p^k.
fn hensel_multi(f: &[BigInt], factors: &[Fp], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let target = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(&target);
        let inv = lc.modinv(&target).expect("lc is a unit");
        return vec![zm(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &target)];
    }
    let mid = factors.len() / 2;
    let lc_p = f.last().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let mut g: Fp = vec![lc_p];
    for u in &factors[..mid] {
        g = fp_mul(&g, u, p);
    }
    let mut h: Fp = vec![1];
    for u in &factors[mid..] {
        h = fp_mul(&h, u, p);
    }
    let (gl, hl) = hensel_two(f, &g, &h, p, k);
    let gl = symmetric(&gl, &target);
    let hl = symmetric(&hl, &target);
    let mut out = hensel_multi(&gl, &factors[..mid], p, k);
    out.extend(hensel_multi(&hl, &factors[mid..], p, k));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn z_divides(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    // exact division over Z; None if g does not divide f
    let mut r: Vec<BigInt> = f.to_vec();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let lg = g.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - dg];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + dg].div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (i, gi) in g.iter().enumerate() {
                r[k + i] -= &c * gi;
            }
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    for &d in degrees {
        let add: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(add);
    }
    s
}

/// Factors a primitive squarefree integer polynomial with f(0) != 0.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.last().unwrap().clone();
    // Try several primes, keep the one with the fewest modular factors and
    // intersect the achievable factor degrees.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut feasible: Option<BTreeSet<usize>> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 8 && p < 5000 {
        p += 2;
        if !is_prime_u64(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        tried += 1;
        let facs = fp_factor(&fp, p, &mut rng);
        let degs: Vec<usize> = facs.iter().map(|u| u.len() - 1).collect();
        let sums = subset_sums(&degs);
        feasible = Some(match feasible {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        });
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        if feasible.as_ref().unwrap().len() <= 2 {
            break;
        }
    }
    let feasible = feasible.expect("some prime is admissible");
    if feasible.len() <= 2 {
        return vec![f.to_vec()];
    }
    let (p, modular) = best.unwrap();

    // Coefficient bound for lc * (monic factor).
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let bound_bits = lc.bits() as f64 + n as f64 + norm2_sq.bits() as f64 / 2.0 + 2.0;
    let k = ((bound_bits / (p as f64).log2()).ceil() as u32).max(1);
    let m = BigInt::from(p).pow(k);
    let mut lifted = hensel_multi(f, &modular, p, k);

    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let total_deg = rest.len() - 1;
        for subset in combinations(lifted.len(), s) {
            let deg: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
            if !feasible.contains(&deg) || deg > total_deg {
                continue;
            }
            let rl = rest.last().unwrap().clone();
            // constant-term test
            let mut c0 = rl.clone();
            for &i in &subset {
                c0 = (c0 * &lifted[i][0]).mod_floor(&m);
            }
            let c0 = symmetric(&[c0], &m)[0].clone();
            if c0.is_zero() || !(&rl * &rest[0]).is_multiple_of(&c0) {
                continue;
            }
            let mut g = vec![rl.clone()];
            for &i in &subset {
                g = zm(&z_mul(&g, &lifted[i]), &m);
            }
            let g = primitive(&symmetric(&g, &m));
            if let Some(q) = z_divides(&rest, &g) {
                out.push(g);
                rest = primitive(&q);
                let keep: Vec<Vec<BigInt>> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u.clone())
                    .collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rational roots of f (deduplicated, increasing).
pub fn rational_roots(f: &QPoly) -> Vec<Q> {
    let mut out: Vec<Q> = factor(f).into_iter().filter(|(g, _)| g.degree() == 1).map(|(g, _)| -g.coeff(0)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn product(fs: &[(QPoly, u32)]) -> QPoly {
        fs.iter().fold(QPoly::one(), |acc, (g, e)| &acc * &g.pow(*e))
    }

    #[test]
    fn cyclotomic_split() {
        // x^4 - x = x (x - 1)(x^2 + x + 1)
        let f = QPoly::from_ints(&[0, -1, 0, 0, 1]);
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
        assert!(fs.iter().any(|(g, _)| *g == QPoly::from_ints(&[1, 1, 1])));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2 - 2)(x^2 - 3)(x^4 - 10x^2 + 1): many modular factors
        let a = QPoly::from_ints(&[-2, 0, 1]);
        let b = QPoly::from_ints(&[-3, 0, 1]);
        let c = QPoly::from_ints(&[1, 0, -10, 0, 1]);
        let f = &(&a * &b) * &c;
        let fs = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn irreducible_radical() {
        let mut c = vec![0i64; 64];
        c[0] = -2;
        c[63] = 1;
        assert!(is_irreducible(&QPoly::from_ints(&c)));
    }

    #[test]
    fn multiplicities_and_rational_roots() {
        let f = &QPoly::from_ints(&[-1, 2]).pow(3) * &QPoly::from_ints(&[1, 0, 1]);
        let fs = factor(&f);
        assert_eq!(fs[0], (QPoly::linear(qi(1), Q::new((-1).into(), 2.into())), 3));
        assert_eq!(rational_roots(&f), vec![Q::new(1.into(), 2.into())]);
    }
}
