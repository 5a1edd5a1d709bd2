use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::gf::CoeffField;
use crate::lattice::{depth, enumerate_labels, CosetLabel, DoubleKey, Side, Window, DEFAULT_BUDGET};
use crate::ring::{build_extension, ExtKind, GaloisGenerator, RingFamily, RingSpec};

fn side(spec: RingSpec, level: u32, n: usize) -> Arc<Side> {
    let fam = Arc::new(RingFamily::new(&spec).unwrap());
    Arc::new(Side::new("F", fam, level, n).unwrap())
}

fn algebra(spec: RingSpec, level: u32, n: usize, l: u32) -> Arc<HeckeAlgebra> {
    HeckeAlgebra::new(side(spec, level, n), Arc::new(CoeffField::prime(l).unwrap())).unwrap()
}

/// `(t_a * t_b)(z) = #{x K in K a K : x^{-1} z in K b K}`, evaluated at each
/// double coset `z` with invariant in the window.
fn oracle_counts(side: &Side, a: &CosetLabel, b: &CosetLabel, window: &Window) -> BTreeMap<DoubleKey, u64> {
    let prec = side.level() + 2 * depth(&a.mu) + (window.max - window.min) as u32 + 1;
    let reps = side.left_reps(a, prec).unwrap();
    let target = side.double_key(b).unwrap();
    let mut out = BTreeMap::new();
    for z in enumerate_labels(side, &window.cochars(side.n()), DEFAULT_BUDGET).unwrap() {
        let zg = side.label_element(&z, prec).unwrap();
        let mut count = 0;
        for x in &reps {
            let w = x.inverse().unwrap().mul(&zg);
            if side.double_key_of(&w).unwrap() == target {
                count += 1;
            }
        }
        if count > 0 {
            out.insert(side.double_key(&z).unwrap(), count);
        }
    }
    out
}

fn check_against_oracle(spec: RingSpec, pairs: &[(Vec<i64>, Vec<i64>)], window: Window) {
    let alg = algebra(spec, 1, 2, 3);
    let side = alg.side().clone();
    for (ma, mb) in pairs {
        let la = CosetLabel::diagonal(ma);
        let lb = CosetLabel::diagonal(mb);
        let ka = side.double_key(&la).unwrap();
        let kb = side.double_key(&lb).unwrap();
        let fast: BTreeMap<DoubleKey, u64> = alg.basis_product(&ka, &kb).unwrap().iter().cloned().collect();
        assert_eq!(fast, oracle_counts(&side, &la, &lb, &window), "{ma:?} * {mb:?}");
        // total number of left cosets is multiplicative
        let total: u64 = fast.iter().map(|(k, c)| c * side.coset_count(&k.mu)).sum();
        assert_eq!(total, side.coset_count(ma) * side.coset_count(mb));
    }
}

#[test]
fn products_match_double_sum_mixed() {
    check_against_oracle(
        RingSpec::mixed(2, 4),
        &[(vec![0, 1], vec![0, 1]), (vec![0, 0], vec![0, 1]), (vec![0, 1], vec![1, 1]), (vec![0, 1], vec![-1, 0])],
        Window { min: -1, max: 2 },
    );
}

#[test]
fn products_match_double_sum_equal() {
    check_against_oracle(RingSpec::equal(2, 4), &[(vec![0, 1], vec![0, 1])], Window { min: 0, max: 2 });
}

#[test]
fn unit_is_neutral() {
    let alg = algebra(RingSpec::mixed(2, 4), 1, 2, 3);
    let one = HeckeElement::unit(&alg).unwrap();
    let mut z = CosetLabel::diagonal(&[0, 1]);
    z.p = vec![1, 1, 0, 1];
    let t = HeckeElement::basis(&alg, &z).unwrap();
    assert_eq!(one.convolve(&t).unwrap(), t);
    assert_eq!(t.convolve(&one).unwrap(), t);
}

#[test]
fn json_round_trip() {
    let alg = algebra(RingSpec::mixed(2, 4), 1, 2, 3);
    let a = HeckeElement::basis(&alg, &CosetLabel::diagonal(&[0, 1])).unwrap();
    let b = a.convolve(&a).unwrap().add(&a.scale(2)).unwrap();
    let json = serde_json::to_string(&b.to_json().unwrap()).unwrap();
    let back = HeckeElement::from_json(&alg, &serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back, b);
}

#[test]
fn mismatched_sides_are_rejected() {
    let a = algebra(RingSpec::mixed(2, 4), 1, 2, 3);
    let b = algebra(RingSpec::equal(2, 4), 1, 2, 3);
    let x = HeckeElement::unit(&a).unwrap();
    let y = HeckeElement::unit(&b).unwrap();
    assert_eq!(x.convolve(&y).unwrap_err().code(), "SIDE_MISMATCH");
    assert!(HeckeAlgebra::new(a.side().clone(), Arc::new(CoeffField::prime(2).unwrap())).is_err());
}

fn ramified_setup() -> (Arc<GaloisGenerator>, Brauer) {
    let f_spec = RingSpec::mixed(3, 3);
    let e_spec = build_extension(&f_spec, ExtKind::Ramified, 2).unwrap();
    let e_fam = Arc::new(RingFamily::new(&e_spec).unwrap());
    let gen = Arc::new(GaloisGenerator::standard(e_fam.clone()).unwrap());
    let field = Arc::new(CoeffField::prime(2).unwrap());
    let e_side = Arc::new(Side::new("E", e_fam, 2, 2).unwrap());
    let ea = HeckeAlgebra::new(e_side, field.clone()).unwrap();
    let fa = HeckeAlgebra::new(side(f_spec, 1, 2), field).unwrap();
    let br = Brauer::new(gen.clone(), ea, fa, DEFAULT_BUDGET).unwrap();
    (gen, br)
}

#[test]
fn sigma_fixes_base_diagonal_and_moves_pi_diagonal() {
    let (gen, br) = ramified_setup();
    let ea = br.source().clone();
    let d = HeckeElement::basis(&ea, &CosetLabel::diagonal(&[0, 2])).unwrap();
    assert!(is_sigma_invariant(&gen, &d).unwrap());
    // sigma(pi) = -pi and -1 is not in K
    let half = CosetLabel::diagonal(&[0, 1]);
    assert!(!is_sigma_invariant(&gen, &HeckeElement::basis(&ea, &half).unwrap()).unwrap());
    let orbit = sigma_orbit_sum(&gen, &ea, &half).unwrap();
    assert!(is_sigma_invariant(&gen, &orbit).unwrap());
    assert_eq!(orbit.terms().len(), 2);
}

#[test]
fn brauer_of_unit_and_invariance_error() {
    let (gen, br) = ramified_setup();
    let ea = br.source().clone();
    let one = HeckeElement::unit(&ea).unwrap();
    assert_eq!(br.restrict(&one, None).unwrap(), HeckeElement::unit(br.target()).unwrap());
    let mut label = CosetLabel::diagonal(&[0, 2]);
    let r = ea.side().level_ring().clone();
    label.p = vec![1, r.gen_t(), 0, 1];
    let t = HeckeElement::basis(&ea, &label).unwrap();
    if !is_sigma_invariant(&gen, &t).unwrap() {
        assert_eq!(br.restrict(&t, None).unwrap_err().code(), "NOT_SIGMA_INVARIANT");
    }
    let d = HeckeElement::basis(&ea, &CosetLabel::diagonal(&[0, 2])).unwrap();
    let w = Window { min: 0, max: 0 };
    assert_eq!(br.restrict(&d, Some(&w)).unwrap_err().code(), "WINDOW_TOO_SMALL");
    let img = br.restrict(&d, None).unwrap();
    assert_eq!(img.value_at(&CosetLabel::diagonal(&[0, 1])).unwrap(), 1);
}
