//! Composition factors and isomorphism tests for small modules, by random
//! algebra elements and Norton's irreducibility criterion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{CoeffField, Gf};
use crate::poly::{self, Poly};

use super::linalg::{reduce_against, Mat};
use super::module::CyclicModule;

/// Largest module dimension the splitting routines accept by default.
pub const DEFAULT_DIM_BOUND: usize = 24;
const SPLIT_ATTEMPTS: usize = 200;
const POOL_CAP: usize = 16;
const HOM_TRIES: usize = 64;
const MEATAXE_SEED: u64 = 0x5eed_0f_a11;

/// Characteristic polynomial `det(x - A)` via reduction to Hessenberg form.
pub fn charpoly(f: &CoeffField, a: &Mat) -> Poly {
    let n = a.rows;
    let mut h = a.clone();
    for m in 1..n {
        let Some(piv) = (m..n).find(|&i| h.get(i, m - 1) != 0) else { continue };
        if piv != m {
            for j in 0..n {
                h.data.swap(piv * n + j, m * n + j);
            }
            for i in 0..n {
                h.data.swap(i * n + piv, i * n + m);
            }
        }
        let inv = f.inv(h.get(m, m - 1)).unwrap();
        for i in m + 1..n {
            let c = f.mul(h.get(i, m - 1), inv);
            if c == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), f.mul(c, h.get(m, j)));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, m), f.mul(c, h.get(r, i)));
                h.set(r, m, v);
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
    let mut ps: Vec<Poly> = vec![vec![1]];
    for k in 0..n {
        let mut next = poly::mul(f, &[f.neg(h.get(k, k)), 1], &ps[k]);
        let mut prod: Gf = 1;
        for i in (0..k).rev() {
            prod = f.mul(prod, h.get(i + 1, i));
            if prod == 0 {
                break;
            }
            let c = f.mul(h.get(i, k), prod);
            next = poly::sub(f, &next, &poly::scale(f, &ps[i], c));
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

pub fn eval_poly(f: &CoeffField, p: &[Gf], a: &Mat) -> Mat {
    let n = a.rows;
    let mut acc = Mat::zero(n, n);
    for &c in p.iter().rev() {
        acc = acc.mul(f, a).add(f, &Mat::identity(n).scale(f, c));
    }
    acc
}

/// Smallest subspace containing `v` and stable under `gens` (RREF rows).
pub fn spin(f: &CoeffField, gens: &[&Mat], v: &[Gf]) -> Mat {
    let n = v.len();
    let mut span = Mat::zero(0, n);
    let mut pivots: Vec<usize> = Vec::new();
    let mut queue = Vec::new();
    let push = |w: Vec<Gf>, span: &mut Mat, pivots: &mut Vec<usize>, queue: &mut Vec<Vec<Gf>>| {
        let r = reduce_against(f, span, pivots, &w);
        if r.iter().any(|&x| x != 0) {
            let (s, p) = span.vstack(&Mat::from_rows(&[r.clone()], n)).rref(f);
            *span = s;
            *pivots = p;
            queue.push(r);
        }
    };
    push(v.to_vec(), &mut span, &mut pivots, &mut queue);
    while let Some(w) = queue.pop() {
        for g in gens {
            push(g.apply(f, &w), &mut span, &mut pivots, &mut queue);
        }
    }
    span
}

/// A proper nonzero stable subspace, or `None` when the module is
/// irreducible.
pub fn find_submodule(f: &CoeffField, gens: &[&Mat], dim: usize, rng: &mut impl Rng) -> Result<Option<Mat>> {
    if dim <= 1 {
        return Ok(None);
    }
    let transposed: Vec<Mat> = gens.iter().map(|g| g.transpose()).collect();
    let transposed: Vec<&Mat> = transposed.iter().collect();
    let mut pool: Vec<Mat> = gens.iter().map(|g| (*g).clone()).collect();
    let q = f.size();
    for _ in 0..SPLIT_ATTEMPTS {
        let i = rng.gen_range(0..pool.len());
        let j = rng.gen_range(0..pool.len());
        let prod = pool[i].mul(f, &pool[j]);
        if pool.len() < POOL_CAP {
            pool.push(prod);
        } else {
            let r = rng.gen_range(gens.len().min(POOL_CAP - 1)..POOL_CAP);
            pool[r] = prod;
        }
        let mut a = Mat::zero(dim, dim);
        for m in &pool {
            a = a.add(f, &m.scale(f, rng.gen_range(0..q)));
        }
        let cp = charpoly(f, &a);
        for (fac, _) in poly::factor(f, &cp, rng) {
            let nf = eval_poly(f, &fac, &a);
            let kern = nf.kernel(f);
            let s = spin(f, gens, kern.row(0));
            if s.rows < dim {
                return Ok(Some(s));
            }
            let kt = nf.transpose().kernel(f);
            let st = spin(f, &transposed, kt.row(0));
            if st.rows < dim {
                return Ok(Some(st.kernel(f)));
            }
            if kern.rows == fac.len() - 1 {
                return Ok(None);
            }
        }
    }
    Err(Error::Undecided(format!("no splitting or irreducibility certificate in dimension {dim}")))
}

/// Irreducible subquotients of a flag of submodules under `T` and the named
/// generators, from the bottom of the flag upwards.
pub fn composition_factors(m: &CyclicModule, bound: usize) -> Result<Vec<CyclicModule>> {
    if m.dim > bound {
        return Err(Error::DimBoundExceeded { dim: m.dim, bound });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MEATAXE_SEED);
    let mut out = Vec::new();
    split(m, &mut rng, &mut out)?;
    Ok(out)
}

fn split(m: &CyclicModule, rng: &mut ChaCha8Rng, out: &mut Vec<CyclicModule>) -> Result<()> {
    if m.dim == 0 {
        return Ok(());
    }
    match find_submodule(&m.field, &m.generators(), m.dim, rng)? {
        None => out.push(m.clone()),
        Some(s) => {
            let zero = Mat::zero(0, m.dim);
            split(&m.subquotient(&s, &zero)?, rng, out)?;
            split(&m.subquotient(&Mat::identity(m.dim), &s)?, rng, out)?;
        }
    }
    Ok(())
}

/// Basis (as flattened matrices) of `{X : X A = B X}` over all generator
/// pairs, `T` included.
pub fn hom_space(a: &CyclicModule, b: &CyclicModule) -> Result<Mat> {
    if *a.field != *b.field {
        return Err(Error::NotCompatible("modules over different coefficient fields".into()));
    }
    if a.generator_names() != b.generator_names() {
        return Err(Error::GeneratorNameMismatch(format!(
            "{:?} against {:?}",
            a.generator_names(),
            b.generator_names()
        )));
    }
    let f = &a.field;
    let (da, db) = (a.dim, b.dim);
    let ga = a.generators();
    let gb = b.generators();
    // X is db x da; unknown (r, s) at r * da + s
    let mut eqs = Mat::zero(ga.len() * db * da, db * da);
    for (g, (ma, mb)) in ga.iter().zip(&gb).enumerate() {
        for i in 0..db {
            for j in 0..da {
                let row = (g * db + i) * da + j;
                for k in 0..da {
                    let idx = i * da + k;
                    let v = f.add(eqs.get(row, idx), ma.get(k, j));
                    eqs.set(row, idx, v);
                }
                for k in 0..db {
                    let idx = k * da + j;
                    let v = f.sub(eqs.get(row, idx), mb.get(i, k));
                    eqs.set(row, idx, v);
                }
            }
        }
    }
    Ok(eqs.kernel(f))
}

/// Whether two modules are isomorphic over `T` and the named generators.
/// Exact for irreducible modules; otherwise a seeded search for an
/// invertible intertwiner, reporting `UNDECIDED` when none turns up.
pub fn is_isomorphic(a: &CyclicModule, b: &CyclicModule) -> Result<bool> {
    let homs = hom_space(a, b)?;
    if a.dim != b.dim {
        return Ok(false);
    }
    if a.dim == 0 {
        return Ok(true);
    }
    if homs.rows == 0 {
        return Ok(false);
    }
    let f = &a.field;
    let d = a.dim;
    let as_mat = |v: &[Gf]| Mat { rows: d, cols: d, data: v.to_vec() };
    for r in 0..homs.rows {
        if as_mat(homs.row(r)).rank(f) == d {
            return Ok(true);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MEATAXE_SEED);
    for _ in 0..HOM_TRIES {
        let mut v = vec![0; d * d];
        for r in 0..homs.rows {
            let c = rng.gen_range(0..f.size());
            for (x, &h) in v.iter_mut().zip(homs.row(r)) {
                *x = f.add(*x, f.mul(c, h));
            }
        }
        if as_mat(&v).rank(f) == d {
            return Ok(true);
        }
    }
    Err(Error::Undecided("no invertible intertwiner found".into()))
}
