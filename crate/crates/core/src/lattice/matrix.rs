use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingFamily};

/// A scalar of the local field: `pi^v * unit`, or zero known up to `pi^floor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Zero { floor: i64 },
    Value { v: i64, unit: Elem, rel_prec: u32 },
}

impl FieldElement {
    pub fn valuation(&self) -> Option<i64> {
        match self {
            FieldElement::Zero { .. } => None,
            FieldElement::Value { v, .. } => Some(*v),
        }
    }

    /// Product; valuations add and relative precision is the smaller one.
    pub fn mul(&self, other: &FieldElement, ring: &Ring) -> FieldElement {
        match (self, other) {
            (FieldElement::Zero { floor }, FieldElement::Value { v, .. })
            | (FieldElement::Value { v, .. }, FieldElement::Zero { floor }) => FieldElement::Zero { floor: floor + v },
            (FieldElement::Zero { floor: a }, FieldElement::Zero { floor: b }) => FieldElement::Zero { floor: a + b },
            (
                FieldElement::Value { v: a, unit: u, rel_prec: pa },
                FieldElement::Value { v: b, unit: w, rel_prec: pb },
            ) => {
                let rel_prec = (*pa).min(*pb);
                FieldElement::Value { v: a + b, unit: ring.reduce(ring.mul(*u, *w), rel_prec as i64), rel_prec }
            }
        }
    }
}

/// An element `pi^shift * M` of `GL_n` over the field, where `M` is an
/// integral matrix known modulo `pi^prec`.
#[derive(Debug, Clone)]
pub struct GroupMatrix {
    ring: Arc<Ring>,
    n: usize,
    shift: i64,
    prec: u32,
    data: Vec<Elem>,
}

impl PartialEq for GroupMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.shift == other.shift
            && self.prec == other.prec
            && self.ring.spec() == other.ring.spec()
            && self.data == other.data
    }
}
impl Eq for GroupMatrix {}

pub(crate) fn mat_mul(r: &Ring, a: &[Elem], b: &[Elem], n: usize) -> Vec<Elem> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let prod = r.mul(aik, b[k * n + j]);
                out[i * n + j] = r.add(out[i * n + j], prod);
            }
        }
    }
    out
}

pub(crate) fn identity_data(n: usize) -> Vec<Elem> {
    let mut d = vec![0; n * n];
    for i in 0..n {
        d[i * n + i] = 1;
    }
    d
}

/// Inverse of a matrix with unit determinant, by Gauss–Jordan elimination
/// with unit pivots.
pub(crate) fn unimodular_inverse(r: &Ring, a: &[Elem], n: usize) -> Result<Vec<Elem>> {
    let mut m = a.to_vec();
    let mut inv = identity_data(n);
    for c in 0..n {
        let pivot = (c..n).find(|&i| r.is_unit(m[i * n + c])).ok_or_else(|| {
            Error::InsufficientPrecision { needed: 1, available: 0 }
        })?;
        if pivot != c {
            for j in 0..n {
                m.swap(pivot * n + j, c * n + j);
                inv.swap(pivot * n + j, c * n + j);
            }
        }
        let s = r.inv_unit(m[c * n + c])?;
        for j in 0..n {
            m[c * n + j] = r.mul(m[c * n + j], s);
            inv[c * n + j] = r.mul(inv[c * n + j], s);
        }
        for i in 0..n {
            if i == c || m[i * n + c] == 0 {
                continue;
            }
            let f = m[i * n + c];
            for j in 0..n {
                m[i * n + j] = r.sub(m[i * n + j], r.mul(f, m[c * n + j]));
                inv[i * n + j] = r.sub(inv[i * n + j], r.mul(f, inv[c * n + j]));
            }
        }
    }
    Ok(inv)
}

impl GroupMatrix {
    /// An integral matrix, exact to the precision of `ring`.
    pub fn integral(ring: Arc<Ring>, n: usize, data: Vec<Elem>) -> GroupMatrix {
        assert_eq!(data.len(), n * n);
        let prec = ring.precision();
        GroupMatrix { ring, n, shift: 0, prec, data }
    }

    pub(crate) fn from_parts(ring: Arc<Ring>, n: usize, shift: i64, prec: u32, data: Vec<Elem>) -> GroupMatrix {
        let data = data.into_iter().map(|x| ring.reduce(x, prec as i64)).collect();
        GroupMatrix { ring, n, shift, prec, data }
    }

    pub fn identity(ring: Arc<Ring>, n: usize) -> GroupMatrix {
        Self::integral(ring, n, identity_data(n))
    }

    /// `varpi_mu = diag(pi^{mu_1}, ..., pi^{mu_n})`.
    pub fn diag_pi(ring: Arc<Ring>, mu: &[i64]) -> GroupMatrix {
        let n = mu.len();
        let base = *mu.iter().min().unwrap_or(&0);
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = ring.pi_pow((mu[i] - base) as u32);
        }
        let prec = ring.precision();
        GroupMatrix { ring, n, shift: base, prec, data }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn shift(&self) -> i64 {
        self.shift
    }
    /// Precision of the integral part.
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        let x = self.get(i, j);
        let v = self.ring.valuation(x);
        if x == 0 || v >= self.prec {
            return FieldElement::Zero { floor: self.shift + self.prec as i64 };
        }
        let rel_prec = self.prec - v;
        let unit = self.ring.reduce(self.ring.div_pi_pow(x, v), rel_prec as i64);
        FieldElement::Value { v: self.shift + v as i64, unit, rel_prec }
    }

    /// Minimum valuation of the integral part (`prec` when it vanishes).
    pub fn content(&self) -> u32 {
        self.data.iter().map(|&x| self.ring.valuation(x).min(self.prec)).min().unwrap_or(self.prec)
    }

    /// Rewrites `pi^shift * M` so that `M` is primitive.
    pub fn normalized(&self) -> GroupMatrix {
        let v = self.content();
        if v == 0 || v >= self.prec {
            return self.clone();
        }
        let data = self.data.iter().map(|&x| self.ring.div_pi_pow(x, v)).collect();
        Self::from_parts(self.ring.clone(), self.n, self.shift + v as i64, self.prec - v, data)
    }

    pub fn mul(&self, other: &GroupMatrix) -> GroupMatrix {
        assert_eq!(self.n, other.n);
        assert!(self.ring.spec() == other.ring.spec(), "matrices over different rings");
        let data = mat_mul(&self.ring, &self.data, &other.data, self.n);
        Self::from_parts(self.ring.clone(), self.n, self.shift + other.shift, self.prec.min(other.prec), data)
    }

    /// Moves the matrix to another precision of the same field. Lowering
    /// projects; raising lifts canonically without claiming new precision.
    pub fn transfer(&self, target: &Arc<Ring>) -> GroupMatrix {
        let data = self.data.iter().map(|&x| self.ring.transfer(x, target)).collect();
        let prec = self.prec.min(target.precision());
        Self::from_parts(target.clone(), self.n, self.shift, prec, data)
    }

    /// Canonical lift treated as an exact element at the target precision.
    pub fn lift_exact(&self, target: &Arc<Ring>) -> GroupMatrix {
        let data = self.data.iter().map(|&x| self.ring.transfer(x, target)).collect();
        Self::from_parts(target.clone(), self.n, self.shift, target.precision(), data)
    }

    pub fn map_entries(&self, f: impl Fn(Elem) -> Elem) -> GroupMatrix {
        let data = self.data.iter().map(|&x| f(x)).collect();
        Self::from_parts(self.ring.clone(), self.n, self.shift, self.prec, data)
    }

    /// Inverse of an element of `GL_n(o)`.
    pub fn inverse_integral(&self) -> Result<GroupMatrix> {
        if self.shift != 0 {
            return Err(Error::SpecMismatch("matrix is not in GL_n(o)".into()));
        }
        let inv = unimodular_inverse(&self.ring, &self.data, self.n)?;
        Ok(Self::from_parts(self.ring.clone(), self.n, 0, self.prec, inv))
    }

    /// Inverse in `GL_n(F)`, through the Cartan decomposition; the integral
    /// part loses `mu_n - mu_1` digits of precision.
    pub fn inverse(&self) -> Result<GroupMatrix> {
        let c = super::cartan::smith_cartan(self)?;
        let n = self.n;
        let top = *c.mu.last().unwrap();
        let low = c.mu[0];
        let r = &self.ring;
        let xinv = c.x.inverse_integral()?;
        let mut d = vec![0; n * n];
        for i in 0..n {
            d[i * n + i] = r.pi_pow((top - c.mu[i]) as u32);
        }
        let data = mat_mul(r, &mat_mul(r, &c.y.data, &d, n), &xinv.data, n);
        let loss = (top - low) as u32;
        let prec = self.prec.saturating_sub(loss);
        Ok(Self::from_parts(r.clone(), n, -top, prec, data))
    }

    /// Membership in the principal congruence subgroup of the given level.
    pub fn in_congruence_subgroup(&self, level: u32) -> Result<bool> {
        let g = self.normalized();
        if g.shift != 0 {
            // non-integral, or every entry divisible by pi
            return Ok(false);
        }
        if g.prec < level {
            return Err(Error::InsufficientPrecision { needed: level, available: g.prec });
        }
        let r = &g.ring;
        for i in 0..g.n {
            for j in 0..g.n {
                let mut x = g.get(i, j);
                if i == j {
                    x = r.sub(x, r.one());
                }
                if r.valuation(x) < level {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_integral_unit(&self) -> bool {
        self.shift == 0 && unimodular_inverse(&self.ring, &self.data, self.n).is_ok()
    }

    pub fn to_json(&self) -> MatrixJson {
        let r = &self.ring;
        let entries = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.entry(i, j) {
                        FieldElement::Zero { floor } => EntryJson { v: floor, unit: None },
                        FieldElement::Value { v, unit, .. } => EntryJson { v, unit: Some(r.to_coords(unit)) },
                    })
                    .collect()
            })
            .collect();
        MatrixJson { n: self.n, level: self.shift + self.prec as i64, entries }
    }

    /// Parses the JSON form, working in the smallest ring of `family` that
    /// holds all entries to the stated absolute precision.
    pub fn from_json(family: &RingFamily, json: &MatrixJson) -> Result<GroupMatrix> {
        let n = json.n;
        if json.entries.len() != n || json.entries.iter().any(|row| row.len() != n) {
            return Err(Error::Parse("matrix shape does not match n".into()));
        }
        let shift = json
            .entries
            .iter()
            .flatten()
            .filter(|e| e.unit.is_some())
            .map(|e| e.v)
            .min()
            .ok_or_else(|| Error::Parse("zero matrix".into()))?;
        if json.level <= shift {
            return Err(Error::Parse("level below the smallest valuation".into()));
        }
        let prec = (json.level - shift) as u32;
        let ring = family.at_pi_precision(prec)?;
        let mut data = Vec::with_capacity(n * n);
        for e in json.entries.iter().flatten() {
            match &e.unit {
                None => data.push(0),
                Some(coords) => {
                    let u = ring.from_coords(coords)?;
                    if !ring.is_unit(u) {
                        return Err(Error::Parse("entry unit is not a unit".into()));
                    }
                    let k = (e.v - shift) as u32;
                    data.push(ring.mul(ring.pi_pow(k), u));
                }
            }
        }
        Ok(Self::from_parts(ring, n, shift, prec, data))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub v: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<u32>>,
}

/// `{n, level, entries}`: entry `(v, unit)` is `pi^v * unit`; an entry without
/// a unit is zero to absolute precision `v`; `level` is the absolute
/// precision of the whole matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub level: i64,
    pub entries: Vec<Vec<EntryJson>>,
}
