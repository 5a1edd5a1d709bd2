use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{CoeffField, Gf};
use crate::lattice::{depth, CosetLabel, DoubleKey, GroupMatrix, LabelJson, LeftKey, Side};
use crate::ring::RingSpec;

/// Integer structure constants of a product of two basis elements.
pub type StructureConstants = Vec<(DoubleKey, u64)>;

/// `H(G, K)` with coefficients in `F_{l^k}` for one side.
#[derive(Debug)]
pub struct HeckeAlgebra {
    side: Arc<Side>,
    field: Arc<CoeffField>,
    products: Mutex<HashMap<(DoubleKey, DoubleKey), Arc<StructureConstants>>>,
}

impl HeckeAlgebra {
    pub fn new(side: Arc<Side>, field: Arc<CoeffField>) -> Result<Arc<HeckeAlgebra>> {
        if field.characteristic() == side.family().spec().p {
            return Err(Error::SamePrime(field.characteristic()));
        }
        Ok(Arc::new(HeckeAlgebra { side, field, products: Mutex::new(HashMap::new()) }))
    }

    pub fn side(&self) -> &Arc<Side> {
        &self.side
    }
    pub fn field(&self) -> &Arc<CoeffField> {
        &self.field
    }

    pub fn compatible(&self, other: &HeckeAlgebra) -> bool {
        self.side.compatible(&other.side) && *self.field == *other.field
    }

    /// Counts `#{(i, j) : a_i b_j K = z K}` for every double coset `KzK`
    /// meeting `KaK * KbK`, from left coset representatives.
    pub fn basis_product(&self, a: &DoubleKey, b: &DoubleKey) -> Result<Arc<StructureConstants>> {
        let cache_key = (a.clone(), b.clone());
        if let Some(c) = self.products.lock().unwrap().get(&cache_key) {
            return Ok(c.clone());
        }
        let side = &self.side;
        let la = side.canonical_label(a)?;
        let lb = side.canonical_label(b)?;
        let prec = side.product_precision(&[depth(&a.mu), depth(&b.mu)]);
        let reps_a = side.left_reps(&la, prec)?;
        let reps_b = side.left_reps(&lb, prec)?;
        let rows: Vec<Vec<(LeftKey, GroupMatrix)>> = reps_a
            .par_iter()
            .map(|x| {
                reps_b
                    .iter()
                    .map(|y| {
                        let z = x.mul(y);
                        Ok((side.left_key(&z)?, z))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut counts: BTreeMap<LeftKey, (u64, GroupMatrix)> = BTreeMap::new();
        for (k, z) in rows.into_iter().flatten() {
            counts.entry(k).or_insert((0, z)).0 += 1;
        }
        let mut assigned: HashMap<LeftKey, DoubleKey> = HashMap::new();
        let mut out: BTreeMap<DoubleKey, u64> = BTreeMap::new();
        for (k, (count, z)) in &counts {
            if let Some(d) = assigned.get(k) {
                debug_assert_eq!(out[d], *count, "bi-invariance of the convolution count");
                continue;
            }
            let label = side.cartan_label(z)?;
            let keys = side.left_keys(&label)?;
            let dkey = DoubleKey { mu: label.mu.clone(), left: keys.iter().next().unwrap().clone() };
            for lk in keys {
                assigned.insert(lk, dkey.clone());
            }
            out.insert(dkey, *count);
        }
        let result = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.products.lock().unwrap().insert(cache_key, result.clone());
        Ok(result)
    }
}

/// A finitely supported bi-`K`-invariant function with values in `F_{l^k}`.
#[derive(Clone)]
pub struct HeckeElement {
    algebra: Arc<HeckeAlgebra>,
    terms: BTreeMap<DoubleKey, Gf>,
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeElement")
            .field("side", &self.algebra.side.name())
            .field("terms", &self.terms)
            .finish()
    }
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.compatible(&other.algebra) && self.terms == other.terms
    }
}
impl Eq for HeckeElement {}

impl HeckeElement {
    pub fn zero(algebra: &Arc<HeckeAlgebra>) -> HeckeElement {
        HeckeElement { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    /// `t_1`, the characteristic function of `K`.
    pub fn unit(algebra: &Arc<HeckeAlgebra>) -> Result<HeckeElement> {
        Self::basis(algebra, &CosetLabel::diagonal(&vec![0; algebra.side.n()]))
    }

    /// The basis element `t_g` for the double coset named by `label`.
    pub fn basis(algebra: &Arc<HeckeAlgebra>, label: &CosetLabel) -> Result<HeckeElement> {
        let key = algebra.side.double_key(label)?;
        Ok(Self::from_key(algebra, key, 1))
    }

    pub fn from_key(algebra: &Arc<HeckeAlgebra>, key: DoubleKey, coeff: Gf) -> HeckeElement {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(key, coeff);
        }
        HeckeElement { algebra: algebra.clone(), terms }
    }

    pub fn of_matrix(algebra: &Arc<HeckeAlgebra>, g: &GroupMatrix) -> Result<HeckeElement> {
        let key = algebra.side.double_key_of(g)?;
        Ok(Self::from_key(algebra, key, 1))
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.algebra
    }
    pub fn side(&self) -> &Arc<Side> {
        &self.algebra.side
    }
    pub fn field(&self) -> &Arc<CoeffField> {
        &self.algebra.field
    }
    pub fn terms(&self) -> &BTreeMap<DoubleKey, Gf> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &DoubleKey) -> Gf {
        self.terms.get(key).copied().unwrap_or(0)
    }

    /// Value of the function at the double coset named by `label`.
    pub fn value_at(&self, label: &CosetLabel) -> Result<Gf> {
        Ok(self.coeff(&self.algebra.side.double_key(label)?))
    }

    fn check(&self, other: &HeckeElement) -> Result<()> {
        if !self.algebra.compatible(&other.algebra) {
            return Err(Error::SideMismatch(format!(
                "{} and {}",
                self.algebra.side.name(),
                other.algebra.side.name()
            )));
        }
        Ok(())
    }

    pub(crate) fn add_term(&mut self, key: DoubleKey, c: Gf) {
        let f = &self.algebra.field;
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Gf) -> HeckeElement {
        let f = &self.algebra.field;
        let mut out = HeckeElement::zero(&self.algebra);
        for (k, &v) in &self.terms {
            out.add_term(k.clone(), f.mul(v, c));
        }
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.add(&other.scale(self.algebra.field.neg(1)))
    }

    /// Convolution product.
    pub fn convolve(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.check(other)?;
        let f = &self.algebra.field;
        let mut out = HeckeElement::zero(&self.algebra);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let c = f.mul(ca, cb);
                for (z, count) in self.algebra.basis_product(a, b)?.iter() {
                    let k = f.from_int((*count % f.characteristic() as u64) as i64);
                    if k != 0 {
                        out.add_term(z.clone(), f.mul(c, k));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Support labels with coefficients, sorted by label.
    pub fn labeled_terms(&self) -> Result<Vec<(CosetLabel, Gf)>> {
        let mut out: Vec<(CosetLabel, Gf)> = self
            .terms
            .iter()
            .map(|(k, &c)| Ok((self.algebra.side.canonical_label(k)?, c)))
            .collect::<Result<_>>()?;
        out.sort();
        Ok(out)
    }

    pub fn to_json(&self) -> Result<HeckeJson> {
        let side = &self.algebra.side;
        let field = &self.algebra.field;
        let terms = self
            .labeled_terms()?
            .into_iter()
            .map(|(l, c)| TermJson { label: side.label_to_json(&l), coeff: field.coords(c) })
            .collect();
        Ok(HeckeJson {
            side: SideJson {
                name: side.name().to_string(),
                ring: side.family().spec().clone(),
                level: side.level(),
                n: side.n(),
            },
            l: field.characteristic(),
            k: field.degree(),
            terms,
        })
    }

    pub fn from_json(algebra: &Arc<HeckeAlgebra>, json: &HeckeJson) -> Result<HeckeElement> {
        let side = &algebra.side;
        let field = &algebra.field;
        if json.side.name != side.name()
            || json.side.level != side.level()
            || json.side.n != side.n()
            || !json.side.ring.same_field(side.family().spec())
        {
            return Err(Error::SideMismatch(format!("element lives on side {}", json.side.name)));
        }
        if json.l != field.characteristic() || json.k != field.degree() {
            return Err(Error::SideMismatch("coefficient field differs".into()));
        }
        let mut out = HeckeElement::zero(algebra);
        for t in &json.terms {
            let label = side.label_from_json(&t.label)?;
            if t.coeff.len() != field.degree() as usize || t.coeff.iter().any(|&c| c >= field.characteristic()) {
                return Err(Error::Parse("coefficient coordinates out of range".into()));
            }
            out.add_term(side.double_key(&label)?, field.from_coords(&t.coeff));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideJson {
    pub name: String,
    pub ring: RingSpec,
    pub level: u32,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub label: LabelJson,
    pub coeff: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeJson {
    pub side: SideJson,
    pub l: u32,
    pub k: u32,
    pub terms: Vec<TermJson>,
}
