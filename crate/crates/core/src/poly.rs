//! Dense univariate polynomials over a [`CoeffField`], little-endian and
//! trimmed (the zero polynomial is the empty vector).

use rand::Rng;

use crate::gf::{CoeffField, Gf};

pub type Poly = Vec<Gf>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Gf]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(f: &CoeffField, a: &[Gf], b: &[Gf]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &CoeffField, a: &[Gf], b: &[Gf]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(f: &CoeffField, a: &[Gf], c: Gf) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &CoeffField, a: &[Gf], b: &[Gf]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &CoeffField, a: &[Gf], b: &[Gf]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut r: Poly = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let c = f.mul(c, lead_inv);
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = f.sub(r[i - db + j], f.mul(c, b[j]));
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(f: &CoeffField, a: &[Gf], b: &[Gf]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &CoeffField, a: &[Gf]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&c) => scale(f, a, f.inv(c).unwrap()),
    }
}

pub fn gcd(f: &CoeffField, a: &[Gf], b: &[Gf]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &CoeffField, a: &[Gf], b: &[Gf], m: &[Gf]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &CoeffField, a: &[Gf], mut e: u64, m: &[Gf]) -> Poly {
    let mut result = rem(f, &[1], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    result
}

/// `a^(q^i) mod m` with `q = |f|`.
fn frobenius_pow(f: &CoeffField, a: &[Gf], i: usize, m: &[Gf]) -> Poly {
    let mut out = rem(f, a, m);
    for _ in 0..i {
        out = powmod(f, &out, f.size() as u64, m);
    }
    out
}

pub fn derivative(f: &CoeffField, a: &[Gf]) -> Poly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
        .collect();
    trim(out)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &CoeffField, a: &[Gf]) -> bool {
    let Some(d) = degree(a) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let a = monic(f, a);
    let xp = x();
    if sub(f, &frobenius_pow(f, &xp, d, &a), &rem(f, &xp, &a)) != Vec::<Gf>::new() {
        return false;
    }
    for r in prime_factors(d) {
        let h = sub(f, &frobenius_pow(f, &xp, d / r, &a), &xp);
        if gcd(f, &h, &a) != vec![1] {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of the given degree, ordering monic
/// polynomials lexicographically from the highest non-leading coefficient
/// down to the constant term.
pub fn smallest_irreducible(f: &CoeffField, deg: usize) -> Poly {
    let q = f.size() as u64;
    let total = q.checked_pow(deg as u32).expect("degree too large");
    for n in 0..total {
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut rest = n;
        for _ in 0..deg {
            coeffs.push((rest % q) as Gf);
            rest /= q;
        }
        coeffs.push(1);
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Squarefree decomposition: pairs `(g, e)` with `a = lead * prod g^e`,
/// each `g` monic and squarefree.
pub fn squarefree(f: &CoeffField, a: &[Gf]) -> Vec<(Poly, usize)> {
    let l = f.characteristic() as usize;
    let mut out = Vec::new();
    let a = monic(f, a);
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(f, &a);
    if da.is_empty() {
        // a = b(X^l): take l-th roots of the coefficients
        let b: Poly = (0..=degree(&a).unwrap() / l)
            .map(|i| f.inverse_frobenius(a[i * l]))
            .collect();
        for (g, e) in squarefree(f, &b) {
            out.push((g, e * l));
        }
        return out;
    }
    let mut c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let dc = degree(&c).unwrap();
        let b: Poly = (0..=dc / l).map(|j| f.inverse_frobenius(c[j * l])).collect();
        for (g, e) in squarefree(f, &b) {
            out.push((g, e * l));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &CoeffField, a: &[Gf]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let xp = x();
    let mut h = rem(f, &xp, &rest);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, f.size() as u64, &rest);
        let g = gcd(f, &sub(f, &h, &xp), &rest);
        if degree(&g).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let dr = degree(&rest).unwrap();
        out.push((rest, dr));
    }
    out
}

/// Splitting polynomial for Cantor–Zassenhaus: `a^((q^d - 1)/2) - 1` in odd
/// characteristic, the absolute trace of `a` in characteristic two.
fn splitter<R: Rng>(f: &CoeffField, a: &[Gf], d: usize, rng: &mut R) -> Poly {
    let n = degree(a).unwrap();
    let r: Poly = trim((0..n).map(|_| rng.gen_range(0..f.size())).collect());
    if f.characteristic() == 2 {
        let bits = f.degree() as usize * d;
        let mut t = r.clone();
        let mut acc = r;
        for _ in 1..bits {
            t = mulmod(f, &t, &t, a);
            acc = add(f, &acc, &t);
        }
        acc
    } else {
        // r^((q^d-1)/(q-1)) * then ^((q-1)/2)
        let mut norm = rem(f, &[1], a);
        let mut t = rem(f, &r, a);
        for _ in 0..d {
            norm = mulmod(f, &norm, &t, a);
            t = powmod(f, &t, f.size() as u64, a);
        }
        let half = powmod(f, &norm, (f.size() as u64 - 1) / 2, a);
        sub(f, &half, &[1])
    }
}

fn equal_degree<R: Rng>(f: &CoeffField, a: &[Gf], d: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let n = degree(a).unwrap();
    if n == d {
        out.push(monic(f, a));
        return;
    }
    loop {
        let s = splitter(f, a, d, rng);
        let g = gcd(f, &s, a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, a, &g).0;
            equal_degree(f, &g, d, rng, out);
            equal_degree(f, &h, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors with multiplicity, sorted by (degree, coeffs).
pub fn factor<R: Rng>(f: &CoeffField, a: &[Gf], rng: &mut R) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree(f, a) {
        for (h, d) in distinct_degree(f, &g) {
            let mut parts = Vec::new();
            equal_degree(f, &h, d, rng, &mut parts);
            out.extend(parts.into_iter().map(|p| (p, e)));
        }
    }
    out.sort_by(|x, y| (x.0.len(), x.0.iter().rev().collect::<Vec<_>>()).cmp(&(y.0.len(), y.0.iter().rev().collect::<Vec<_>>())));
    // merge equal factors coming from different squarefree layers
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (p, e) in out {
        match merged.last_mut() {
            Some((q, k)) if *q == p => *k += e,
            _ => merged.push((p, e)),
        }
    }
    merged
}
