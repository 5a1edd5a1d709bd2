use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gf::{CoeffField, Gf};

fn fp(l: u32) -> Arc<CoeffField> {
    Arc::new(CoeffField::prime(l).unwrap())
}

fn cycle(l: usize) -> Mat {
    let mut t = Mat::zero(l, l);
    for i in 0..l {
        t.set((i + 1) % l, i, 1);
    }
    t
}

fn module(f: &Arc<CoeffField>, t: Mat) -> CyclicModule {
    CyclicModule::new(f.clone(), t, None).unwrap()
}

fn dims(m: &CyclicModule) -> (usize, usize) {
    (tate_cohomology(m, 0).unwrap().dim, tate_cohomology(m, 1).unwrap().dim)
}

fn scalar_module(f: &Arc<CoeffField>, gens: &[(&str, Gf)]) -> CyclicModule {
    let action = gens.iter().map(|(n, c)| (n.to_string(), Mat::from_rows(&[vec![*c]], 1))).collect();
    CyclicModule::trivial(f.clone(), action, 1).unwrap()
}

#[test]
fn norm_operator_examples() {
    let f2 = fp(2);
    assert_eq!(norm_operator(&module(&f2, Mat::identity(3))), Mat::zero(3, 3));
    let ones2 = Mat::from_rows(&[vec![1, 1], vec![1, 1]], 2);
    assert_eq!(norm_operator(&module(&f2, cycle(2))), ones2);
    let f3 = fp(3);
    assert_eq!(norm_operator(&module(&f3, cycle(3))), Mat { rows: 3, cols: 3, data: vec![1; 9] });
    let bad = CyclicModule::new(f3, cycle(2), None).unwrap_err();
    assert_eq!(bad.code(), "NOT_ORDER_L");
}

#[test]
fn tate_of_trivial_regular_and_zero() {
    for l in [2, 3, 5] {
        let f = fp(l);
        assert_eq!(dims(&module(&f, Mat::identity(1))), (1, 1));
        assert_eq!(dims(&module(&f, cycle(l as usize))), (0, 0));
        assert_eq!(dims(&module(&f, Mat::zero(0, 0))), (0, 0));
    }
}

#[test]
fn frobenius_twist_on_f4() {
    let f4 = Arc::new(CoeffField::new(2, 2).unwrap());
    let omega = f4.from_coords(&[0, 1]);
    let m = scalar_module(&f4, &[("a", omega)]);
    let tw = m.frobenius_twist();
    assert_eq!(tw.action().unwrap()["a"].get(0, 0), f4.mul(omega, omega));
    assert_eq!(tw.frobenius_twist(), m);
    let f2 = fp(2);
    let m1 = scalar_module(&f2, &[("a", 1)]);
    assert_eq!(m1.frobenius_twist(), m1);
}

#[test]
fn transport_renames_and_round_trips() {
    let f = fp(3);
    let m = scalar_module(&f, &[("a", 2), ("b", 1)]);
    let id: BTreeMap<String, String> = [("a", "a"), ("b", "b")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    assert_eq!(m.transport(&id).unwrap(), m);
    let fw: BTreeMap<String, String> = [("a", "x"), ("b", "y")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let back: BTreeMap<String, String> = fw.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    let moved = m.transport(&fw).unwrap();
    assert_eq!(moved.action().unwrap()["x"], m.action().unwrap()["a"]);
    assert_eq!(moved.transport(&back).unwrap(), m);
    let bare = module(&f, Mat::identity(1));
    assert_eq!(bare.transport(&id).unwrap_err().code(), "MISSING_ACTION");
}

/// `det(x - A)` at every point of the field, by Gaussian elimination.
fn det(f: &CoeffField, a: &Mat) -> Gf {
    let n = a.rows;
    let mut m = a.clone();
    let mut d = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
        if p != c {
            for j in 0..n {
                m.data.swap(p * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let piv = m.get(c, c);
        d = f.mul(d, piv);
        let inv = f.inv(piv).unwrap();
        for i in c + 1..n {
            let k = f.mul(m.get(i, c), inv);
            for j in 0..n {
                let v = f.sub(m.get(i, j), f.mul(k, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    d
}

#[test]
fn charpoly_matches_determinant_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (l, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let f = CoeffField::new(l, k).unwrap();
        for n in 1..=6 {
            let a = Mat { rows: n, cols: n, data: (0..n * n).map(|_| rng.gen_range(0..f.size())).collect() };
            let cp = charpoly(&f, &a);
            assert_eq!(cp.len(), n + 1);
            for x in f.elements() {
                let lhs = cp.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
                let xi = Mat::identity(n).scale(&f, x).sub(&f, &a);
                assert_eq!(lhs, det(&f, &xi));
            }
        }
    }
}

/// Irreducibility by spinning every nonzero vector (small fields only).
fn irreducible_by_exhaustive_spin(m: &CyclicModule) -> bool {
    let f = &m.field;
    let q = f.size() as usize;
    let gens = m.generators();
    (1..q.pow(m.dim as u32)).all(|mut code| {
        let v: Vec<Gf> = (0..m.dim)
            .map(|_| {
                let c = (code % q) as Gf;
                code /= q;
                c
            })
            .collect();
        spin(f, &gens, &v).rows == m.dim
    })
}

#[test]
fn composition_factor_examples() {
    let f = fp(3);
    let one = scalar_module(&f, &[("a", 1)]);
    assert_eq!(composition_factors(&one, DEFAULT_DIM_BOUND).unwrap(), vec![one.clone()]);

    let two = scalar_module(&f, &[("a", 2)]);
    let sum = one.direct_sum(&two).unwrap();
    let facs = composition_factors(&sum, DEFAULT_DIM_BOUND).unwrap();
    assert_eq!(facs.len(), 2);
    assert!(facs.contains(&one) && facs.contains(&two));

    let upper = Mat::from_rows(&[vec![1, 1], vec![0, 2]], 2);
    let tri = CyclicModule::trivial(f.clone(), [("a".to_string(), upper)].into(), 2).unwrap();
    let facs = composition_factors(&tri, DEFAULT_DIM_BOUND).unwrap();
    let mut scalars: Vec<Gf> = facs.iter().map(|m| m.action().unwrap()["a"].get(0, 0)).collect();
    scalars.sort();
    assert_eq!(scalars, vec![1, 2]);

    let big = module(&f, Mat::identity(DEFAULT_DIM_BOUND + 1));
    assert_eq!(composition_factors(&big, DEFAULT_DIM_BOUND).unwrap_err().code(), "DIM_BOUND_EXCEEDED");
}

#[test]
fn random_modules_split_into_certified_irreducibles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (l, k) in [(2, 1), (3, 1), (2, 2)] {
        let f = Arc::new(CoeffField::new(l, k).unwrap());
        for _ in 0..12 {
            let d = rng.gen_range(1..=5usize);
            // block upper triangular pieces make reducible modules likely
            let mut action = BTreeMap::new();
            for name in ["a", "b"] {
                let mut a = Mat::zero(d, d);
                for i in 0..d {
                    for j in 0..d {
                        if j + 1 >= i && rng.gen_bool(0.7) {
                            a.set(i, j, rng.gen_range(0..f.size()));
                        }
                    }
                }
                action.insert(name.to_string(), a);
            }
            let m = CyclicModule::trivial(f.clone(), action, d).unwrap();
            let facs = composition_factors(&m, DEFAULT_DIM_BOUND).unwrap();
            assert_eq!(facs.iter().map(|x| x.dim).sum::<usize>(), d);
            for fac in &facs {
                assert!(irreducible_by_exhaustive_spin(fac));
            }
        }
    }
}

#[test]
fn isomorphism_detects_conjugates() {
    let f = fp(3);
    let a = Mat::from_rows(&[vec![0, 1], vec![2, 0]], 2);
    let p = Mat::from_rows(&[vec![1, 2], vec![1, 1]], 2);
    let b = p.mul(&f, &a).mul(&f, &p.inverse(&f).unwrap());
    let ma = CyclicModule::trivial(f.clone(), [("a".to_string(), a)].into(), 2).unwrap();
    let mb = CyclicModule::trivial(f.clone(), [("a".to_string(), b)].into(), 2).unwrap();
    assert!(is_isomorphic(&ma, &mb).unwrap());
    let mc = scalar_module(&f, &[("a", 1)]).direct_sum(&scalar_module(&f, &[("a", 2)])).unwrap();
    assert!(!is_isomorphic(&ma, &mc).unwrap());
    let other = scalar_module(&f, &[("z", 1)]);
    assert_eq!(is_isomorphic(&scalar_module(&f, &[("a", 1)]), &other).unwrap_err().code(), "GENERATOR_NAME_MISMATCH");
}

#[test]
fn linkage_examples() {
    let f = fp(3);
    let xi = scalar_module(&f, &[("h1", 2), ("h2", 1)]);
    let br: BTreeMap<String, String> =
        [("h1", "b1"), ("h2", "b2")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let rho = scalar_module(&f, &[("b1", 2), ("b2", 1)]);
    let v = linkage_check(&xi, &rho, &br, DEFAULT_DIM_BOUND).unwrap();
    assert!(v.iter().all(|x| x.linked && x.tate_dim == 1 && x.field_degree == 1));
    let off = scalar_module(&f, &[("b1", 1), ("b2", 1)]);
    assert!(linkage_check(&xi, &off, &br, DEFAULT_DIM_BOUND).unwrap().iter().all(|x| !x.linked));
    let mut partial = br.clone();
    partial.remove("h2");
    assert_eq!(linkage_check(&xi, &rho, &partial, DEFAULT_DIM_BOUND).unwrap_err().code(), "GENERATOR_NAME_MISMATCH");
}

#[test]
fn linkage_sees_the_frobenius_twist() {
    let f4 = Arc::new(CoeffField::new(2, 2).unwrap());
    let omega = f4.from_coords(&[0, 1]);
    let xi = scalar_module(&f4, &[("h", omega)]);
    let br: BTreeMap<String, String> = [("h".to_string(), "b".to_string())].into();
    let same = scalar_module(&f4, &[("b", omega)]);
    let frob = scalar_module(&f4, &[("b", f4.frobenius(omega))]);
    assert!(linkage_check(&xi, &same, &br, DEFAULT_DIM_BOUND).unwrap().iter().all(|x| !x.linked));
    assert!(linkage_check(&xi, &frob, &br, DEFAULT_DIM_BOUND).unwrap().iter().all(|x| x.linked && x.field_degree == 2));
}

#[test]
fn module_json_round_trip() {
    let f4 = Arc::new(CoeffField::new(2, 2).unwrap());
    let m = scalar_module(&f4, &[("h", f4.from_coords(&[1, 1]))]).direct_sum(&scalar_module(&f4, &[("h", 1)])).unwrap();
    let text = serde_json::to_string(&m.to_json()).unwrap();
    assert_eq!(CyclicModule::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), m);
    let r = tate_cohomology(&m, 0).unwrap();
    assert_eq!(r.to_json(&m).dim, 2);
}
