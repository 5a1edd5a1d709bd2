use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Model {
    /// `Z/p^N`, a truncation of a p-adic field.
    Mixed,
    /// `F_p[t]/(t^N)`, a truncation of `F_p((t))`.
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExtKind {
    Unramified,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtSpec {
    pub kind: ExtKind,
    pub l: u32,
    /// Monic defining polynomial over `F_p`, little-endian, for unramified
    /// extensions. Filled in by the builder when absent.
    #[serde(rename = "minimalPoly", default, skip_serializing_if = "Option::is_none")]
    pub minimal_poly: Option<Vec<u32>>,
}

/// A truncated ring `o/p^N`, optionally extended by a degree-`l` extension.
///
/// For extensions `N` is the precision of the base; the extension ring then
/// models `o_E/p_E^{e N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub model: Model,
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u32,
    /// EQUAL only: the uniformizer as `t`-coefficients (little-endian); it must
    /// have `t`-valuation one. Absent means `t`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformizer: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtSpec>,
}

impl RingSpec {
    pub fn mixed(p: u32, n: u32) -> Self {
        RingSpec { model: Model::Mixed, p, n, uniformizer: None, ext: None }
    }

    pub fn equal(p: u32, n: u32) -> Self {
        RingSpec { model: Model::Equal, p, n, uniformizer: None, ext: None }
    }

    pub fn with_uniformizer(mut self, coeffs: Vec<u32>) -> Self {
        self.uniformizer = Some(coeffs);
        self
    }

    pub fn base(&self) -> RingSpec {
        RingSpec { ext: None, ..self.clone() }
    }

    pub fn at_precision(&self, n: u32) -> RingSpec {
        RingSpec { n, ..self.clone() }
    }

    pub fn degree(&self) -> u32 {
        self.ext.as_ref().map_or(1, |e| e.l)
    }

    pub fn ramification(&self) -> u32 {
        match &self.ext {
            Some(ExtSpec { kind: ExtKind::Ramified, l, .. }) => *l,
            _ => 1,
        }
    }

    /// Same field, possibly different precision.
    pub fn same_field(&self, other: &RingSpec) -> bool {
        self.at_precision(other.n) == *other
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::ConfigInvalid(format!("p = {} is not prime", self.p)));
        }
        if self.n == 0 {
            return Err(Error::ConfigInvalid("precision N must be at least 1".into()));
        }
        if let Some(u) = &self.uniformizer {
            if self.model != Model::Equal {
                return Err(Error::ConfigInvalid("custom uniformizer needs the EQUAL model".into()));
            }
            if u.first().copied().unwrap_or(0) % self.p != 0
                || u.get(1).copied().unwrap_or(0) % self.p == 0
                || u.iter().any(|&c| c >= self.p)
            {
                return Err(Error::ConfigInvalid(
                    "uniformizer must be t times a unit, with coefficients below p".into(),
                ));
            }
        }
        if let Some(ext) = &self.ext {
            if !is_prime(ext.l) {
                return Err(Error::ConfigInvalid(format!("l = {} is not prime", ext.l)));
            }
            if ext.l == self.p {
                return Err(Error::SamePrime(ext.l));
            }
            if ext.kind == ExtKind::Ramified && (self.p - 1) % ext.l != 0 {
                return Err(Error::GaloisConditionFailed { p: self.p, l: ext.l });
            }
        }
        Ok(())
    }
}
