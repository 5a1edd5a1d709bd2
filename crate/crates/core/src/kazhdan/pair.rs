use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::CoeffField;
use crate::hecke::{Brauer, HeckeAlgebra, HeckeElement};
use crate::lattice::{CosetLabel, DoubleKey, Side};
use crate::ring::{build_extension, build_lambda, build_pi, matched_generators, ExtKind, GaloisGenerator, RingFamily, RingIso, RingSpec};

/// How the two base fields of a close pair are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairMode {
    /// `Z/p^m` against `F_p[t]/t^m`; needs `m = 1`.
    MixedEqual,
    /// `F_p[t]/t^m` against itself with uniformizer `-t + t^2` on the right.
    EqualEqual,
}

impl PairMode {
    pub fn default_for(m: u32) -> PairMode {
        if m == 1 {
            PairMode::MixedEqual
        } else {
            PairMode::EqualEqual
        }
    }
}

/// `F`, `F'` with `Λ : o_F/p_F^m -> o_F'/p_F'^m`.
#[derive(Debug)]
pub struct ClosePair {
    pub f: Arc<RingFamily>,
    pub f2: Arc<RingFamily>,
    pub m: u32,
    pub lambda: RingIso,
}

impl ClosePair {
    pub fn new(f: &RingSpec, f2: &RingSpec, m: u32) -> Result<ClosePair> {
        let fa = Arc::new(RingFamily::new(f)?);
        let fb = Arc::new(RingFamily::new(f2)?);
        let lambda = build_lambda(&fa, &fb, m)?;
        Ok(ClosePair { f: fa, f2: fb, m, lambda })
    }

    pub fn standard(mode: PairMode, p: u32, m: u32) -> Result<ClosePair> {
        match mode {
            PairMode::MixedEqual => {
                if m != 1 {
                    return Err(Error::ConfigInvalid("mixed-equal pairs are only 1-close".into()));
                }
                Self::new(&RingSpec::mixed(p, m), &RingSpec::equal(p, m), m)
            }
            PairMode::EqualEqual => {
                Self::new(&RingSpec::equal(p, m), &RingSpec::equal(p, m).with_uniformizer(vec![0, p - 1, 1]), m)
            }
        }
    }
}

/// Degree-`l` extensions `E/F`, `E'/F'` with `Π` and matched generators.
#[derive(Debug)]
pub struct ExtensionPair {
    pub base: ClosePair,
    pub kind: ExtKind,
    pub l: u32,
    pub e: u32,
    pub ext: Arc<RingFamily>,
    pub ext2: Arc<RingFamily>,
    pub pi: RingIso,
    pub sigma: Arc<GaloisGenerator>,
    pub sigma2: Arc<GaloisGenerator>,
}

impl ExtensionPair {
    /// Builds both extensions and checks `Π|_o = Λ`, `Π σ = σ' Π` and that
    /// both generators have order `l`, exhaustively on `o_E/p_E^{em}`.
    pub fn build(base: ClosePair, kind: ExtKind, l: u32) -> Result<ExtensionPair> {
        let m = base.m;
        let ext = Arc::new(RingFamily::new(&build_extension(&base.f.spec().at_precision(m), kind, l)?)?);
        let ext2 = Arc::new(RingFamily::new(&build_extension(&base.f2.spec().at_precision(m), kind, l)?)?);
        let pi = build_pi(&base.lambda, &ext, &ext2)?;
        let (sigma, sigma2) = matched_generators(&base.lambda, ext.clone(), ext2.clone())?;
        let a = pi.domain().clone();
        let b = pi.codomain().clone();
        for x in base.lambda.domain().elements() {
            if pi.apply(a.from_base(x)) != b.from_base(base.lambda.apply(x)) {
                return Err(Error::NotCompatible("Π does not restrict to Λ".into()));
            }
        }
        for x in a.elements() {
            if pi.apply(sigma.apply(&a, x)?) != sigma2.apply(&b, pi.apply(x))? {
                return Err(Error::NotCompatible("Π σ differs from σ' Π".into()));
            }
            if sigma.apply_pow(&a, x, l)? != x {
                return Err(Error::NotOrderL);
            }
        }
        if l > 1 && a.elements().all(|x| sigma.apply(&a, x).map_or(false, |y| y == x)) {
            return Err(Error::NotOrderL);
        }
        let e = ext.ramification();
        Ok(ExtensionPair { base, kind, l, e, ext, ext2, pi, sigma: Arc::new(sigma), sigma2: Arc::new(sigma2) })
    }
}

/// The Kazhdan transfer between two sides: labels are moved by applying a
/// ring isomorphism of the level rings to `(P, Q)`.
#[derive(Debug)]
pub struct Transfer {
    source: Arc<HeckeAlgebra>,
    target: Arc<HeckeAlgebra>,
    iso: Arc<RingIso>,
    forward: bool,
}

impl Transfer {
    pub fn new(source: Arc<HeckeAlgebra>, target: Arc<HeckeAlgebra>, iso: Arc<RingIso>) -> Result<Transfer> {
        let forward = iso.domain().spec().same_field(source.side().family().spec())
            && iso.codomain().spec().same_field(target.side().family().spec());
        let backward = iso.codomain().spec().same_field(source.side().family().spec())
            && iso.domain().spec().same_field(target.side().family().spec());
        if !(forward || backward) {
            return Err(Error::SideMismatch("isomorphism does not connect the two sides".into()));
        }
        let (src, tgt) = (source.side(), target.side());
        if src.level_ring().size() != iso.domain().size() || tgt.level_ring().size() != iso.domain().size() {
            return Err(Error::SideMismatch("isomorphism is not at the congruence level".into()));
        }
        if src.n() != tgt.n() || *source.field() != *target.field() {
            return Err(Error::SideMismatch("ranks or coefficient fields differ".into()));
        }
        Ok(Transfer { source, target, iso, forward })
    }

    pub fn inverse(&self) -> Transfer {
        Transfer {
            source: self.target.clone(),
            target: self.source.clone(),
            iso: self.iso.clone(),
            forward: !self.forward,
        }
    }

    pub fn source(&self) -> &Arc<HeckeAlgebra> {
        &self.source
    }
    pub fn target(&self) -> &Arc<HeckeAlgebra> {
        &self.target
    }

    fn map_elem(&self, x: u32) -> u32 {
        if self.forward {
            self.iso.apply(x)
        } else {
            self.iso.apply_inverse(x)
        }
    }

    /// `(mu, P, Q) -> (mu, Λ(P), Λ(Q))`.
    pub fn map_label(&self, label: &CosetLabel) -> CosetLabel {
        CosetLabel {
            mu: label.mu.clone(),
            p: label.p.iter().map(|&x| self.map_elem(x)).collect(),
            q: label.q.iter().map(|&x| self.map_elem(x)).collect(),
        }
    }

    pub fn map_key(&self, key: &DoubleKey) -> Result<DoubleKey> {
        let label = self.source.side().canonical_label(key)?;
        self.target.side().double_key(&self.map_label(&label))
    }

    /// `t_{a varpi_mu b^{-1}} -> t_{a' varpi'_mu b'^{-1}}`, coefficients unchanged.
    pub fn apply(&self, f: &HeckeElement) -> Result<HeckeElement> {
        if !f.algebra().compatible(&self.source) {
            return Err(Error::SideMismatch(format!("element is not on side {}", self.source.side().name())));
        }
        let mut out = HeckeElement::zero(&self.target);
        for (k, &c) in f.terms() {
            out.add_term(self.map_key(k)?, c);
        }
        Ok(out)
    }
}

/// Hecke algebras on all four fields of an extension pair, with transfers
/// and Brauer maps.
#[derive(Debug)]
pub struct Diagram {
    pub pair: ExtensionPair,
    pub f: Arc<HeckeAlgebra>,
    pub f2: Arc<HeckeAlgebra>,
    pub e: Arc<HeckeAlgebra>,
    pub e2: Arc<HeckeAlgebra>,
    pub kaz_f: Transfer,
    pub kaz_e: Transfer,
    pub br: Brauer,
    pub br2: Brauer,
}

impl Diagram {
    pub fn new(pair: ExtensionPair, n: usize, field: Arc<CoeffField>, budget: u64) -> Result<Diagram> {
        let m = pair.base.m;
        let em = pair.e * m;
        let f = HeckeAlgebra::new(Arc::new(Side::new("F", pair.base.f.clone(), m, n)?), field.clone())?;
        let f2 = HeckeAlgebra::new(Arc::new(Side::new("F'", pair.base.f2.clone(), m, n)?), field.clone())?;
        let e = HeckeAlgebra::new(Arc::new(Side::new("E", pair.ext.clone(), em, n)?), field.clone())?;
        let e2 = HeckeAlgebra::new(Arc::new(Side::new("E'", pair.ext2.clone(), em, n)?), field)?;
        let kaz_f = Transfer::new(f.clone(), f2.clone(), Arc::new(pair.base.lambda.clone()))?;
        let kaz_e = Transfer::new(e.clone(), e2.clone(), Arc::new(pair.pi.clone()))?;
        let br = Brauer::new(pair.sigma.clone(), e.clone(), f.clone(), budget)?;
        let br2 = Brauer::new(pair.sigma2.clone(), e2.clone(), f2.clone(), budget)?;
        Ok(Diagram { pair, f, f2, e, e2, kaz_f, kaz_e, br, br2 })
    }
}
