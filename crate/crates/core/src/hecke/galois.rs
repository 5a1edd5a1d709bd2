use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::lattice::{depth, labels_with_invariant, sigma_on_group, CosetLabel, DoubleKey, GroupMatrix, Side, Window};
use crate::ring::GaloisGenerator;

use super::algebra::{HeckeAlgebra, HeckeElement};

fn check_family(gen: &GaloisGenerator, side: &Side) -> Result<()> {
    if gen.family().spec() != side.family().spec() {
        return Err(Error::SideMismatch(format!("Galois generator does not act on side {}", side.name())));
    }
    Ok(())
}

/// `sigma(K g K) = K sigma(g) K`.
pub fn sigma_key(gen: &GaloisGenerator, side: &Side, key: &DoubleKey) -> Result<DoubleKey> {
    check_family(gen, side)?;
    let label = side.canonical_label(key)?;
    let g = side.label_element(&label, side.level() + depth(&label.mu))?;
    side.double_key_of(&sigma_on_group(gen, &g)?)
}

/// `(sigma f)(g) = f(sigma^{-1} g)`, i.e. `sigma(t_g) = t_{sigma(g)}`.
pub fn sigma_act(gen: &GaloisGenerator, f: &HeckeElement) -> Result<HeckeElement> {
    let side = f.side().clone();
    let mut out = HeckeElement::zero(f.algebra());
    for (k, &c) in f.terms() {
        out.add_term(sigma_key(gen, &side, k)?, c);
    }
    Ok(out)
}

pub fn is_sigma_invariant(gen: &GaloisGenerator, f: &HeckeElement) -> Result<bool> {
    Ok(sigma_act(gen, f)? == *f)
}

/// Distinct double cosets `sigma^i(K g K)`.
pub fn sigma_orbit(gen: &GaloisGenerator, side: &Side, key: &DoubleKey) -> Result<Vec<DoubleKey>> {
    let mut orbit = vec![key.clone()];
    loop {
        let next = sigma_key(gen, side, orbit.last().unwrap())?;
        if next == *key {
            return Ok(orbit);
        }
        if orbit.len() as u32 >= gen.order() {
            return Err(Error::NotOrderL);
        }
        orbit.push(next);
    }
}

/// `sum` of `t_h` over the distinct elements of the `sigma`-orbit of `t_g`.
pub fn sigma_orbit_sum(gen: &GaloisGenerator, algebra: &Arc<HeckeAlgebra>, label: &CosetLabel) -> Result<HeckeElement> {
    let side = algebra.side();
    let key = side.double_key(label)?;
    let mut out = HeckeElement::zero(algebra);
    for k in sigma_orbit(gen, side, &key)? {
        out.add_term(k, 1);
    }
    Ok(out)
}

/// Restriction of `sigma`-invariant functions on `G(E)` to `G(F)`.
#[derive(Debug)]
pub struct Brauer {
    sigma: Arc<GaloisGenerator>,
    source: Arc<HeckeAlgebra>,
    target: Arc<HeckeAlgebra>,
    budget: u64,
    fibres: Mutex<HashMap<Vec<i64>, Arc<Vec<(DoubleKey, DoubleKey)>>>>,
}

impl Brauer {
    /// `source` lives on the extension `E`, `target` on the base `F`.
    pub fn new(sigma: Arc<GaloisGenerator>, source: Arc<HeckeAlgebra>, target: Arc<HeckeAlgebra>, budget: u64) -> Result<Brauer> {
        check_family(&sigma, source.side())?;
        let e_spec = source.side().family().spec();
        let f_spec = target.side().family().spec();
        if e_spec.ext.is_none() || e_spec.base() != *f_spec {
            return Err(Error::SideMismatch("source is not an extension of the target field".into()));
        }
        let e = source.side().family().ramification();
        if source.side().level() != e * target.side().level() || source.side().n() != target.side().n() {
            return Err(Error::SideMismatch("levels or ranks of E and F do not match".into()));
        }
        if *source.field() != *target.field() {
            return Err(Error::SideMismatch("coefficient fields differ".into()));
        }
        Ok(Brauer { sigma, source, target, budget, fibres: Mutex::new(HashMap::new()) })
    }

    pub fn source(&self) -> &Arc<HeckeAlgebra> {
        &self.source
    }
    pub fn target(&self) -> &Arc<HeckeAlgebra> {
        &self.target
    }
    pub fn sigma(&self) -> &Arc<GaloisGenerator> {
        &self.sigma
    }

    /// `G(F) -> G(E)` on a matrix over the base.
    pub fn embed(&self, g: &GroupMatrix) -> Result<GroupMatrix> {
        let e = self.source.side().family().ramification();
        let ring = self.source.side().family().at(g.ring().base_precision())?;
        let data = g.data().iter().map(|&x| ring.from_base(x)).collect();
        Ok(GroupMatrix::from_parts(ring, g.n(), e as i64 * g.shift(), e * g.precision(), data))
    }

    /// The `E` double coset containing `iota(h)` for an `F` label.
    pub fn embed_key(&self, label: &CosetLabel) -> Result<DoubleKey> {
        let fs = self.target.side();
        let h = fs.label_element(label, fs.level() + depth(&label.mu))?;
        self.source.side().double_key_of(&self.embed(&h)?)
    }

    /// Pairs `(E key, F key)` for all `F` double cosets with invariant `nu`.
    fn fibre(&self, nu: &[i64]) -> Result<Arc<Vec<(DoubleKey, DoubleKey)>>> {
        if let Some(f) = self.fibres.lock().unwrap().get(nu) {
            return Ok(f.clone());
        }
        let mut pairs = Vec::new();
        for (fkey, label) in labels_with_invariant(self.target.side(), nu, self.budget)? {
            pairs.push((self.embed_key(&label)?, fkey));
        }
        let pairs = Arc::new(pairs);
        self.fibres.lock().unwrap().insert(nu.to_vec(), pairs.clone());
        Ok(pairs)
    }

    /// `Br(f)(h) = f(iota(h))`. Requires `f` to be `sigma`-invariant; when a
    /// window is given, every needed `F` cocharacter must lie in it.
    pub fn restrict(&self, f: &HeckeElement, window: Option<&Window>) -> Result<HeckeElement> {
        if !f.algebra().compatible(&self.source) {
            return Err(Error::SideMismatch("element is not on the extension side".into()));
        }
        if !is_sigma_invariant(&self.sigma, f)? {
            return Err(Error::NotSigmaInvariant);
        }
        let e = self.source.side().family().ramification() as i64;
        let mut by_nu: BTreeMap<Vec<i64>, Vec<(&DoubleKey, u32)>> = BTreeMap::new();
        for (k, &c) in f.terms() {
            if k.mu.iter().all(|m| m.rem_euclid(e) == 0) {
                let nu: Vec<i64> = k.mu.iter().map(|m| m / e).collect();
                by_nu.entry(nu).or_default().push((k, c));
            }
        }
        let mut out = HeckeElement::zero(&self.target);
        for (nu, terms) in by_nu {
            if let Some(w) = window {
                if !w.contains(&nu) {
                    return Err(Error::WindowTooSmall(nu));
                }
            }
            let fibre = self.fibre(&nu)?;
            for (ekey, c) in terms {
                for (img, fkey) in fibre.iter() {
                    if img == ekey {
                        out.add_term(fkey.clone(), c);
                    }
                }
            }
        }
        Ok(out)
    }
}
