use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::spec::{ExtKind, ExtSpec, Model, RingSpec};
use super::truncated::{Elem, Ring};

/// All truncations `o/p^N` of one field, built on demand and shared.
#[derive(Debug)]
pub struct RingFamily {
    spec: RingSpec,
    cache: Mutex<BTreeMap<u32, Arc<Ring>>>,
}

impl RingFamily {
    /// `spec.n` is only used to validate the field data.
    pub fn new(spec: &RingSpec) -> Result<Self> {
        let ring = Ring::new(spec)?;
        // the builder fills in the default minimal polynomial
        let spec = ring.spec().clone();
        let mut cache = BTreeMap::new();
        cache.insert(spec.n, Arc::new(ring));
        Ok(RingFamily { spec, cache: Mutex::new(cache) })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn ramification(&self) -> u32 {
        self.spec.ramification()
    }

    /// The ring at base precision `n`.
    pub fn at(&self, n: u32) -> Result<Arc<Ring>> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(r) = cache.get(&n) {
            return Ok(r.clone());
        }
        let ring = Arc::new(Ring::new(&self.spec.at_precision(n))?);
        cache.insert(n, ring.clone());
        Ok(ring)
    }

    /// The smallest ring whose `pi`-adic precision is at least `prec`.
    pub fn at_pi_precision(&self, prec: u32) -> Result<Arc<Ring>> {
        let e = self.ramification();
        self.at(prec.div_ceil(e).max(1))
    }
}

/// A ring isomorphism between two finite rings, stored as a lookup table.
#[derive(Debug, Clone)]
pub struct RingIso {
    domain: Arc<Ring>,
    codomain: Arc<Ring>,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

impl RingIso {
    pub fn domain(&self) -> &Arc<Ring> {
        &self.domain
    }
    pub fn codomain(&self) -> &Arc<Ring> {
        &self.codomain
    }
    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x as usize]
    }
    pub fn apply_inverse(&self, y: Elem) -> Elem {
        self.inverse[y as usize]
    }

    fn from_table(domain: Arc<Ring>, codomain: Arc<Ring>, table: Vec<Elem>) -> Result<Self> {
        let mut inverse = vec![u32::MAX; codomain.size() as usize];
        for (x, &y) in table.iter().enumerate() {
            if inverse[y as usize] != u32::MAX {
                return Err(Error::NotMClose("transport map is not injective".into()));
            }
            inverse[y as usize] = x as u32;
        }
        if domain.size() != codomain.size() {
            return Err(Error::NotMClose("rings have different sizes".into()));
        }
        Ok(RingIso { domain, codomain, table, inverse })
    }

    /// Exhaustive check of the ring homomorphism axioms.
    pub fn verify_homomorphism(&self) -> bool {
        let (a, b) = (&self.domain, &self.codomain);
        if self.apply(a.one()) != b.one() {
            return false;
        }
        a.elements().all(|x| {
            a.elements().all(|y| {
                self.apply(a.add(x, y)) == b.add(self.apply(x), self.apply(y))
                    && self.apply(a.mul(x, y)) == b.mul(self.apply(x), self.apply(y))
            })
        })
    }
}

/// `Λ : o_F/p_F^m -> o_F'/p_F'^m`, sending `sum c_j varpi^j` to
/// `sum c_j varpi'^j` for digits `c_j` in `{0, .., p-1}`.
pub fn build_lambda(f: &RingFamily, f2: &RingFamily, m: u32) -> Result<RingIso> {
    let (s, s2) = (f.spec(), f2.spec());
    if s.ext.is_some() || s2.ext.is_some() {
        return Err(Error::KindMismatch("closeness data is defined on base fields".into()));
    }
    if m == 0 {
        return Err(Error::ConfigInvalid("closeness level must be at least 1".into()));
    }
    if s.p != s2.p {
        return Err(Error::NotMClose(format!("residue characteristics {} and {}", s.p, s2.p)));
    }
    if s.model != s2.model && m > 1 {
        return Err(Error::NotMClose(format!(
            "o/p^{m} has characteristic p^{m} in the MIXED model and p in the EQUAL model"
        )));
    }
    let a = f.at(m)?;
    let b = f2.at(m)?;
    let table: Vec<Elem> = a
        .elements()
        .map(|x| {
            let digits = a.pi_digits(x);
            let mut y = b.zero();
            for (j, &c) in digits.iter().enumerate() {
                let term = b.mul(b.residue_rep(c), b.pi_pow(j as u32));
                y = b.add(y, term);
            }
            y
        })
        .collect();
    let iso = RingIso::from_table(a, b, table)?;
    if !iso.verify_homomorphism() {
        return Err(Error::NotMClose("digit transport is not a ring homomorphism".into()));
    }
    Ok(iso)
}

/// Fills in an extension of degree `l` over `base`, checking the
/// arithmetic conditions.
pub fn build_extension(base: &RingSpec, kind: ExtKind, l: u32) -> Result<RingSpec> {
    if base.ext.is_some() {
        return Err(Error::ConfigInvalid("base ring already has an extension".into()));
    }
    let mut spec = base.clone();
    spec.ext = Some(ExtSpec { kind, l, minimal_poly: None });
    spec.validate()?;
    let ring = Ring::new(&spec)?;
    Ok(ring.spec().clone())
}

/// `Π : o_E/p_E^{em} -> o_E'/p_E'^{em}`, coefficientwise `Λ` and `T -> T`.
pub fn build_pi(lambda: &RingIso, e: &RingFamily, e2: &RingFamily) -> Result<RingIso> {
    let (s, s2) = (e.spec(), e2.spec());
    let (Some(x), Some(x2)) = (&s.ext, &s2.ext) else {
        return Err(Error::KindMismatch("both sides must be extensions".into()));
    };
    if x.kind != x2.kind || x.l != x2.l {
        return Err(Error::KindMismatch(format!(
            "{:?} of degree {} against {:?} of degree {}",
            x.kind, x.l, x2.kind, x2.l
        )));
    }
    let m = lambda.domain().base_precision();
    if !s.base().same_field(lambda.domain().spec()) || !s2.base().same_field(lambda.codomain().spec()) {
        return Err(Error::SpecMismatch("extensions do not sit over the closeness data".into()));
    }
    if x.kind == ExtKind::Unramified && x.minimal_poly != x2.minimal_poly {
        return Err(Error::KindMismatch("unramified extensions use different polynomials".into()));
    }
    let a = e.at(m)?;
    let b = e2.at(m)?;
    let l = a.degree() as usize;
    let table: Vec<Elem> = a
        .elements()
        .map(|v| {
            let c = a.coords(v);
            let mapped: Vec<Elem> = c[..l].iter().map(|&ci| lambda.apply(ci)).collect();
            b.from_base_coords(&mapped)
        })
        .collect();
    let iso = RingIso::from_table(a, b, table)?;
    if !iso.verify_homomorphism() {
        return Err(Error::KindMismatch("coefficientwise transport is not a homomorphism".into()));
    }
    Ok(iso)
}

/// Newton iteration for a root of `g` (ring coefficients, little-endian)
/// starting at `x`; requires `g'(x)` to be a unit.
fn hensel_root(r: &Ring, g: &[Elem], mut x: Elem) -> Result<Elem> {
    let eval = |poly: &[Elem], x: Elem| poly.iter().rev().fold(r.zero(), |acc, &c| r.add(r.mul(acc, x), c));
    let dg: Vec<Elem> = g
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| r.mul(c, r.from_int(i as i64)))
        .collect();
    for _ in 0..=r.precision() {
        let d = r.inv_unit(eval(&dg, x))?;
        x = r.sub(x, r.mul(eval(g, x), d));
    }
    debug_assert_eq!(eval(g, x), 0);
    Ok(x)
}

/// Smallest residue `r != 1` in `F_p` with `r^l = 1`.
pub fn root_of_unity_residue(p: u32, l: u32) -> Result<u32> {
    if l == 0 || (p - 1) % l != 0 || l == 1 {
        return Err(Error::GaloisConditionFailed { p, l });
    }
    (2..p)
        .find(|&r| (0..l).fold(1u64, |acc, _| acc * r as u64 % p as u64) == 1)
        .ok_or(Error::GaloisConditionFailed { p, l })
}

/// The Hensel lift of the smallest nontrivial `l`-th root of unity of `F_p`
/// into the base ring of `spec`.
pub fn primitive_root_of_unity(spec: &RingSpec, l: u32) -> Result<Elem> {
    let r = root_of_unity_residue(spec.p, l)?;
    let ring = Ring::new(&spec.base())?;
    lift_root_of_unity(&ring, r, l)
}

fn lift_root_of_unity(ring: &Ring, residue: u32, l: u32) -> Result<Elem> {
    let mut g = vec![ring.zero(); l as usize + 1];
    g[0] = ring.neg(ring.one());
    g[l as usize] = ring.one();
    hensel_root(ring, &g, ring.from_int(residue as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GaloisRule {
    /// `T` goes to the root of the defining polynomial congruent to `T^p`.
    Frobenius,
    /// `T` goes to `zeta T`, `zeta` lifting the given residue.
    ZetaScaling { residue: u32 },
}

/// A generator of `Gal(E/F)`, applied at any precision of `E`.
#[derive(Debug)]
pub struct GaloisGenerator {
    family: Arc<RingFamily>,
    rule: GaloisRule,
    tables: Mutex<BTreeMap<u32, Arc<Vec<Elem>>>>,
}

impl GaloisGenerator {
    pub fn new(family: Arc<RingFamily>, rule: GaloisRule) -> Result<Self> {
        let ext = family
            .spec()
            .ext
            .clone()
            .ok_or_else(|| Error::KindMismatch("Galois action needs an extension".into()))?;
        match (ext.kind, rule) {
            (ExtKind::Unramified, GaloisRule::Frobenius) => {}
            (ExtKind::Ramified, GaloisRule::ZetaScaling { residue }) => {
                let p = family.spec().p as u64;
                let r = residue as u64 % p;
                let pow = (0..ext.l).fold(1u64, |a, _| a * r % p);
                if r <= 1 || pow != 1 {
                    return Err(Error::ConfigInvalid(format!(
                        "{residue} is not a nontrivial {}-th root of unity mod {p}",
                        ext.l
                    )));
                }
            }
            _ => return Err(Error::KindMismatch("Galois rule does not fit the extension".into())),
        }
        Ok(GaloisGenerator { family, rule, tables: Mutex::new(BTreeMap::new()) })
    }

    /// The default generator: Frobenius, or scaling by the smallest
    /// nontrivial root of unity.
    pub fn standard(family: Arc<RingFamily>) -> Result<Self> {
        let spec = family.spec().clone();
        let ext = spec.ext.clone().ok_or_else(|| Error::KindMismatch("no extension".into()))?;
        let rule = match ext.kind {
            ExtKind::Unramified => GaloisRule::Frobenius,
            ExtKind::Ramified => GaloisRule::ZetaScaling { residue: root_of_unity_residue(spec.p, ext.l)? },
        };
        Self::new(family, rule)
    }

    pub fn rule(&self) -> GaloisRule {
        self.rule
    }

    pub fn family(&self) -> &Arc<RingFamily> {
        &self.family
    }

    pub fn order(&self) -> u32 {
        self.family.spec().degree()
    }

    /// Image of `T` in the ring at base precision `ring.base_precision()`.
    pub fn image_of_t(&self, ring: &Ring) -> Result<Elem> {
        let t = ring.gen_t();
        match self.rule {
            GaloisRule::ZetaScaling { residue } => {
                let zeta = lift_root_of_unity(ring, residue, ring.degree())?;
                Ok(ring.mul(zeta, t))
            }
            GaloisRule::Frobenius => {
                let start = ring.pow(t, ring.p() as u64);
                hensel_root(ring, ring.minimal_poly(), start)
            }
        }
    }

    fn table(&self, ring: &Ring) -> Result<Arc<Vec<Elem>>> {
        debug_assert!(ring.spec().same_field(self.family.spec()));
        let n = ring.base_precision();
        if let Some(t) = self.tables.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let s = self.image_of_t(ring)?;
        let l = ring.degree() as usize;
        let powers: Vec<Elem> = (0..l).map(|i| ring.pow(s, i as u64)).collect();
        let table: Vec<Elem> = ring
            .elements()
            .map(|x| {
                let c = ring.coords(x);
                (0..l).fold(ring.zero(), |acc, i| ring.add(acc, ring.mul(ring.from_base(c[i]), powers[i])))
            })
            .collect();
        let table = Arc::new(table);
        self.tables.lock().unwrap().insert(n, table.clone());
        Ok(table)
    }

    pub fn apply(&self, ring: &Ring, x: Elem) -> Result<Elem> {
        Ok(self.table(ring)?[x as usize])
    }

    /// `sigma^k`, `k` taken modulo the order.
    pub fn apply_pow(&self, ring: &Ring, x: Elem, k: u32) -> Result<Elem> {
        let t = self.table(ring)?;
        let mut y = x;
        for _ in 0..k % self.order() {
            y = t[y as usize];
        }
        Ok(y)
    }
}

/// Generators on both sides of a close pair, matched so that
/// `Π ∘ σ = σ' ∘ Π`.
pub fn matched_generators(
    lambda: &RingIso,
    e: Arc<RingFamily>,
    e2: Arc<RingFamily>,
) -> Result<(GaloisGenerator, GaloisGenerator)> {
    let sigma = GaloisGenerator::standard(e.clone())?;
    let rule2 = match sigma.rule() {
        GaloisRule::Frobenius => GaloisRule::Frobenius,
        GaloisRule::ZetaScaling { residue } => {
            let a = lambda.domain();
            let b = lambda.codomain();
            let image = lambda.apply(a.from_int(residue as i64));
            GaloisRule::ZetaScaling { residue: b.residue_code(image) }
        }
    };
    let sigma2 = GaloisGenerator::new(e2, rule2)?;
    Ok((sigma, sigma2))
}

/// Which of the supported closeness configurations a pair of base fields is.
pub fn pair_mode(a: &RingSpec, b: &RingSpec) -> &'static str {
    match (a.model, b.model) {
        (Model::Equal, Model::Equal) => "equal-equal",
        (Model::Mixed, Model::Mixed) => "mixed-mixed",
        _ => "mixed-equal",
    }
}
