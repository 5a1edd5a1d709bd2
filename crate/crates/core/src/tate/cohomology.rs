use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::linalg::{quotient_basis, Mat};
use super::module::{mat_to_json, CyclicModule, MatJson};

/// `N = 1 + T + ... + T^{l-1}`.
pub fn norm_operator(m: &CyclicModule) -> Mat {
    let f = &m.field;
    let mut acc = Mat::zero(m.dim, m.dim);
    let mut power = Mat::identity(m.dim);
    for _ in 0..f.characteristic() {
        acc = acc.add(f, &power);
        power = power.mul(f, &m.t);
    }
    acc
}

/// The subspaces `(cycles, boundaries)` with `Ĥ^i = cycles / boundaries`:
/// `ker(1 - T) / im N` for `i = 0`, `ker N / im(1 - T)` for `i = 1`.
pub fn tate_pair(m: &CyclicModule, i: u8) -> Result<(Mat, Mat)> {
    let f = &m.field;
    let n = norm_operator(m);
    let d = Mat::identity(m.dim).sub(f, &m.t);
    match i {
        0 => Ok((d.kernel(f), n.image(f))),
        1 => Ok((n.kernel(f), d.image(f))),
        _ => Err(Error::ConfigInvalid(format!("Tate degree {i} is not 0 or 1"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateResult {
    pub i: u8,
    pub dim: usize,
    /// Rows: canonical representatives of a basis of the quotient.
    pub basis: Mat,
}

impl TateResult {
    pub fn to_json(&self, m: &CyclicModule) -> TateJson {
        TateJson { i: self.i, dim: self.dim, basis: mat_to_json(&m.field, &self.basis) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateJson {
    pub i: u8,
    pub dim: usize,
    pub basis: MatJson,
}

pub fn tate_cohomology(m: &CyclicModule, i: u8) -> Result<TateResult> {
    let (cycles, boundaries) = tate_pair(m, i)?;
    let basis = quotient_basis(&m.field, &cycles, &boundaries);
    Ok(TateResult { i, dim: basis.rows, basis })
}

/// `Ĥ^i` with the action induced by the named generators, which must
/// commute with `T`.
pub fn tate_module(m: &CyclicModule, i: u8) -> Result<CyclicModule> {
    let f = &m.field;
    for (name, a) in m.action()? {
        if a.mul(f, &m.t) != m.t.mul(f, a) {
            return Err(Error::NotCompatible(format!("generator {name} does not commute with T")));
        }
    }
    let (cycles, boundaries) = tate_pair(m, i)?;
    m.subquotient(&cycles, &boundaries)
}
