use crate::error::{Error, Result};

use super::matrix::{identity_data, GroupMatrix};

/// `g = x * varpi_mu * y^{-1}` with `x, y` in `GL_n(o)`.
#[derive(Debug, Clone)]
pub struct Cartan {
    pub mu: Vec<i64>,
    pub x: GroupMatrix,
    pub y: GroupMatrix,
}

/// Smith normal form over the truncated DVR. Pivots have minimal valuation,
/// ties broken by the first `(row, column)` in row-major order; eliminations
/// are exact and the transforms are accumulated alongside.
pub fn smith_cartan(g: &GroupMatrix) -> Result<Cartan> {
    let r = g.ring().clone();
    let n = g.n();
    let prec = g.precision();
    let mut a = g.data().to_vec();
    let mut x = identity_data(n);
    let mut y = identity_data(n);
    let mut mu = Vec::with_capacity(n);
    let red = |v: u32| -> u32 { v.min(prec) };
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let v = red(r.valuation(a[i * n + j]));
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, pi, pj) = best.unwrap();
        if v >= prec {
            return Err(Error::InsufficientPrecision { needed: v + 1, available: prec });
        }
        if pi != k {
            for j in 0..n {
                a.swap(pi * n + j, k * n + j);
            }
            for i in 0..n {
                x.swap(i * n + pi, i * n + k);
            }
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + pj, i * n + k);
                y.swap(i * n + pj, i * n + k);
            }
        }
        let pivot = a[k * n + k];
        let unit = r.div_pi_pow(pivot, v);
        let uinv = r.inv_unit(unit)?;
        for i in k + 1..n {
            let b = a[i * n + k];
            if b == 0 {
                continue;
            }
            let f = r.mul(r.div_pi_pow(b, v), uinv);
            for j in k..n {
                a[i * n + j] = r.reduce(r.sub(a[i * n + j], r.mul(f, a[k * n + j])), prec as i64);
            }
            a[i * n + k] = 0;
            for row in 0..n {
                x[row * n + k] = r.add(x[row * n + k], r.mul(f, x[row * n + i]));
            }
        }
        for j in k + 1..n {
            let b = a[k * n + j];
            if b == 0 {
                continue;
            }
            let f = r.mul(r.div_pi_pow(b, v), uinv);
            for i in k..n {
                a[i * n + j] = r.reduce(r.sub(a[i * n + j], r.mul(f, a[i * n + k])), prec as i64);
            }
            a[k * n + j] = 0;
            for row in 0..n {
                y[row * n + j] = r.sub(y[row * n + j], r.mul(f, y[row * n + k]));
            }
        }
        a[k * n + k] = r.pi_pow(v);
        for row in 0..n {
            x[row * n + k] = r.mul(x[row * n + k], unit);
        }
        mu.push(g.shift() + v as i64);
    }
    Ok(Cartan {
        mu,
        x: GroupMatrix::from_parts(r.clone(), n, 0, prec, x),
        y: GroupMatrix::from_parts(r, n, 0, prec, y),
    })
}

/// Cartan invariant from valuations of gcds of minors: the gcd of the
/// `k x k` minors has valuation `mu_1 + ... + mu_k`.
pub fn cartan_by_minors(g: &GroupMatrix) -> Result<Vec<i64>> {
    let r = g.ring();
    let n = g.n();
    let prec = g.precision();
    let mut partial = vec![0i64; n + 1];
    for k in 1..=n {
        let mut best = u32::MAX;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let d = minor_det(r, g.data(), n, &rows, &cols);
                best = best.min(r.valuation(d));
            }
        }
        // a minor of size k is known modulo pi^prec (entries are integral)
        if best >= prec {
            return Err(Error::InsufficientPrecision { needed: best + 1, available: prec });
        }
        partial[k] = best as i64 + k as i64 * g.shift();
    }
    Ok((1..=n).map(|k| partial[k] - partial[k - 1]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

fn minor_det(r: &crate::ring::Ring, a: &[u32], n: usize, rows: &[usize], cols: &[usize]) -> u32 {
    if rows.len() == 1 {
        return a[rows[0] * n + cols[0]];
    }
    let mut acc = r.zero();
    for (idx, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = r.mul(a[rows[0] * n + c], minor_det(r, a, n, &rows[1..], &rest));
        acc = if idx % 2 == 0 { r.add(acc, term) } else { r.sub(acc, term) };
    }
    acc
}
