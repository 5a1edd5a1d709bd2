use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::CoeffField;

use super::linalg::{coordinates, quotient_basis, Mat};

/// A finite-dimensional `F_{l^k}`-space with an operator `T`, `T^l = 1`, and
/// optionally the matrices of finitely many named algebra elements.
#[derive(Debug, Clone)]
pub struct CyclicModule {
    pub field: Arc<CoeffField>,
    pub dim: usize,
    pub t: Mat,
    pub action: Option<BTreeMap<String, Mat>>,
}

impl PartialEq for CyclicModule {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.dim == other.dim && self.t == other.t && self.action == other.action
    }
}
impl Eq for CyclicModule {}

impl CyclicModule {
    pub fn new(field: Arc<CoeffField>, t: Mat, action: Option<BTreeMap<String, Mat>>) -> Result<CyclicModule> {
        let dim = t.rows;
        if !t.is_square() {
            return Err(Error::Parse("T is not square".into()));
        }
        if let Some(a) = &action {
            if a.values().any(|m| m.rows != dim || m.cols != dim) {
                return Err(Error::Parse("action matrix has the wrong size".into()));
            }
        }
        let l = field.characteristic() as u64;
        if t.pow(&field, l) != Mat::identity(dim) {
            return Err(Error::NotOrderL);
        }
        Ok(CyclicModule { field, dim, t, action })
    }

    /// `T = 1` and the given action.
    pub fn trivial(field: Arc<CoeffField>, action: BTreeMap<String, Mat>, dim: usize) -> Result<CyclicModule> {
        Self::new(field, Mat::identity(dim), Some(action))
    }

    pub fn action(&self) -> Result<&BTreeMap<String, Mat>> {
        self.action.as_ref().ok_or(Error::MissingAction)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.action.as_ref().map(|a| a.keys().cloned().collect()).unwrap_or_default()
    }

    /// `T` followed by the named generators in name order.
    pub fn generators(&self) -> Vec<&Mat> {
        let mut out = vec![&self.t];
        if let Some(a) = &self.action {
            out.extend(a.values());
        }
        out
    }

    pub fn direct_sum(&self, other: &CyclicModule) -> Result<CyclicModule> {
        if *self.field != *other.field || self.generator_names() != other.generator_names() {
            return Err(Error::GeneratorNameMismatch("summands act through different generators".into()));
        }
        let action = match (&self.action, &other.action) {
            (Some(a), Some(b)) => Some(a.iter().map(|(k, m)| (k.clone(), m.direct_sum(&b[k]))).collect()),
            _ => None,
        };
        CyclicModule::new(self.field.clone(), self.t.direct_sum(&other.t), action)
    }

    /// The module `upper / lower` for stable subspaces `lower ⊆ upper`, in the
    /// canonical basis of `quotient_basis`.
    pub fn subquotient(&self, upper: &Mat, lower: &Mat) -> Result<CyclicModule> {
        let f = &self.field;
        let q = quotient_basis(f, upper, lower);
        let (lb, lp) = lower.rref(f);
        let (_, qp) = q.rref(f);
        let induce = |a: &Mat| -> Result<Mat> {
            let d = q.rows;
            let mut out = Mat::zero(d, d);
            for j in 0..d {
                let w = a.apply(f, q.row(j));
                let w = super::linalg::reduce_against(f, &lb, &lp, &w);
                let c = coordinates(f, &q, &qp, &w)
                    .ok_or_else(|| Error::NotCompatible("operator does not preserve the subquotient".into()))?;
                for (i, &v) in c.iter().enumerate() {
                    out.set(i, j, v);
                }
            }
            Ok(out)
        };
        let t = induce(&self.t)?;
        let action = match &self.action {
            Some(a) => Some(a.iter().map(|(k, m)| Ok((k.clone(), induce(m)?))).collect::<Result<_>>()?),
            None => None,
        };
        CyclicModule::new(self.field.clone(), t, action)
    }

    /// Scalars act through the inverse Frobenius: every matrix entry `x`
    /// becomes `x^{l^{k-1}}`.
    pub fn frobenius_twist(&self) -> CyclicModule {
        let f = self.field.clone();
        let tw = |m: &Mat| m.map(|x| f.inverse_frobenius(x));
        CyclicModule {
            field: self.field.clone(),
            dim: self.dim,
            t: tw(&self.t),
            action: self.action.as_ref().map(|a| a.iter().map(|(k, m)| (k.clone(), tw(m))).collect()),
        }
    }

    /// Renames the generators along `names`; every generator must be mapped.
    pub fn transport(&self, names: &BTreeMap<String, String>) -> Result<CyclicModule> {
        let action = self.action()?;
        let mut out = BTreeMap::new();
        for (k, m) in action {
            let target = names
                .get(k)
                .ok_or_else(|| Error::GeneratorNameMismatch(format!("no image for generator {k}")))?;
            if out.insert(target.clone(), m.clone()).is_some() {
                return Err(Error::GeneratorNameMismatch(format!("two generators map to {target}")));
            }
        }
        Ok(CyclicModule { field: self.field.clone(), dim: self.dim, t: self.t.clone(), action: Some(out) })
    }

    pub fn to_json(&self) -> ModuleJson {
        let f = &self.field;
        ModuleJson {
            l: f.characteristic(),
            k: f.degree(),
            dim: self.dim,
            t: mat_to_json(f, &self.t),
            action: self.action.as_ref().map(|a| a.iter().map(|(k, m)| (k.clone(), mat_to_json(f, m))).collect()),
        }
    }

    pub fn from_json(json: &ModuleJson) -> Result<CyclicModule> {
        let f = Arc::new(CoeffField::new(json.l, json.k)?);
        let t = mat_from_json(&f, &json.t, json.dim)?;
        let action = match &json.action {
            Some(a) => Some(a.iter().map(|(k, m)| Ok((k.clone(), mat_from_json(&f, m, json.dim)?))).collect::<Result<_>>()?),
            None => None,
        };
        CyclicModule::new(f, t, action)
    }
}

/// Matrix entries as coordinate vectors over `F_l`.
pub type MatJson = Vec<Vec<Vec<u32>>>;

pub fn mat_to_json(f: &CoeffField, m: &Mat) -> MatJson {
    (0..m.rows).map(|i| (0..m.cols).map(|j| f.coords(m.get(i, j))).collect()).collect()
}

pub fn mat_from_json(f: &CoeffField, m: &MatJson, cols: usize) -> Result<Mat> {
    let mut rows = Vec::with_capacity(m.len());
    for r in m {
        if r.len() != cols {
            return Err(Error::Parse("matrix row has the wrong length".into()));
        }
        let mut row = Vec::with_capacity(cols);
        for c in r {
            if c.len() != f.degree() as usize || c.iter().any(|&x| x >= f.characteristic()) {
                return Err(Error::Parse("matrix entry is not a coordinate vector over F_l".into()));
            }
            row.push(f.from_coords(c));
        }
        rows.push(row);
    }
    Ok(Mat::from_rows(&rows, cols))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub l: u32,
    pub k: u32,
    pub dim: usize,
    #[serde(rename = "T")]
    pub t: MatJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<BTreeMap<String, MatJson>>,
}
