use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::CoeffField;
use crate::hecke::{sigma_act, sigma_orbit_sum, HeckeAlgebra, HeckeElement, HeckeJson};
use crate::lattice::{enumerate_labels, labels_with_invariant, CosetLabel, GroupMatrix, Side, Window, DEFAULT_BUDGET};
use crate::ring::{ExtKind, Ring};

use super::pair::{ClosePair, Diagram, ExtensionPair, PairMode, Transfer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Unramified,
    Ramified,
}

impl CaseKind {
    pub fn ext_kind(self) -> ExtKind {
        match self {
            CaseKind::Unramified => ExtKind::Unramified,
            CaseKind::Ramified => ExtKind::Ramified,
        }
    }
}

/// Everything that determines a check run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub p: u32,
    pub l: u32,
    pub m: u32,
    pub n: usize,
    pub case_kind: CaseKind,
    pub pair_mode: PairMode,
    /// Cocharacters with entries in `[0, window]`.
    pub window: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap: Option<u32>,
    pub budget: u64,
    pub k: u32,
    /// Number of seeded random samples added to the structured family.
    pub samples: usize,
}

impl RunConfig {
    pub fn new(p: u32, l: u32, m: u32, case_kind: CaseKind) -> RunConfig {
        RunConfig {
            p,
            l,
            m,
            n: 2,
            case_kind,
            pair_mode: PairMode::default_for(m),
            window: 2,
            seed: 0,
            precision_cap: None,
            budget: DEFAULT_BUDGET,
            k: 1,
            samples: 25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if !crate::gf::is_prime(self.p) || !crate::gf::is_prime(self.l) {
            return bad(format!("p = {} and l = {} must be prime", self.p, self.l));
        }
        if self.l == self.p {
            return bad("l must differ from p".into());
        }
        if self.case_kind == CaseKind::Ramified && (self.p - 1) % self.l != 0 {
            return bad(format!("ramified case needs l | p - 1, got p = {}, l = {}", self.p, self.l));
        }
        if self.pair_mode == PairMode::MixedEqual && self.m != 1 {
            return bad("mixed-equal pairs need m = 1".into());
        }
        if self.m == 0 || self.n == 0 || self.k == 0 {
            return bad("m, n and k must be positive".into());
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn field(&self) -> Result<Arc<CoeffField>> {
        Ok(Arc::new(CoeffField::new(self.l, self.k)?))
    }

    fn cochars(&self) -> Vec<Vec<i64>> {
        Window::spread(self.window).cochars(self.n)
    }

    /// Fails when products of window elements need more precision than the cap.
    fn check_precision(&self, level: u32) -> Result<()> {
        let needed = level + 2 * (self.n as u32 - 1) * self.window;
        match self.precision_cap {
            Some(cap) if cap < needed => Err(Error::InsufficientPrecision { needed, available: cap }),
            _ => Ok(()),
        }
    }

    pub fn diagram(&self) -> Result<Diagram> {
        let base = ClosePair::standard(self.pair_mode, self.p, self.m)?;
        let pair = ExtensionPair::build(base, self.case_kind.ext_kind(), self.l)?;
        Diagram::new(pair, self.n, self.field()?, self.budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub input: Value,
    pub lhs: HeckeJson,
    pub rhs: HeckeJson,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub library_version: String,
    pub samples: Vec<Sample>,
    pub pass: bool,
}

impl Report {
    fn new(command: &str, config: &RunConfig, samples: Vec<Sample>) -> Report {
        let pass = samples.iter().all(|s| s.equal);
        Report {
            command: command.to_string(),
            config: config.clone(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            samples,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| !s.equal)
    }
}

fn sample(input: Value, lhs: &HeckeElement, rhs: &HeckeElement) -> Result<Sample> {
    Ok(Sample { input, lhs: lhs.to_json()?, rhs: rhs.to_json()?, equal: lhs == rhs })
}

/// Uniform element of `GL_n` over a finite ring, by rejection.
pub fn random_gl(ring: &Arc<Ring>, n: usize, rng: &mut impl Rng) -> Vec<u32> {
    loop {
        let data: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..ring.size())).collect();
        if GroupMatrix::integral(ring.clone(), n, data.clone()).inverse_integral().is_ok() {
            return data;
        }
    }
}

pub fn random_label(side: &Side, cochars: &[Vec<i64>], rng: &mut impl Rng) -> CosetLabel {
    let mu = cochars.choose(rng).expect("nonempty window").clone();
    let r = side.level_ring();
    CosetLabel { mu, p: random_gl(r, side.n(), rng), q: random_gl(r, side.n(), rng) }
}

/// At most `cap` elements of `GL_n(o/p^level)`: all of them when the group is
/// small enough, otherwise a seeded selection.
fn level_elements(side: &Side, cap: usize, rng: &mut impl Rng) -> Vec<Vec<u32>> {
    let group = side.level_group();
    if group.len() <= cap {
        group.clone()
    } else {
        let mut picks: Vec<Vec<u32>> = group.choose_multiple(rng, cap).cloned().collect();
        picks.sort();
        picks
    }
}

pub const EXHAUSTIVE_PAIR_LIMIT: usize = 4096;
pub const LEVEL_SAMPLE_CAP: usize = 100;

fn run_parallel<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Sample> + Sync + Send) -> Result<Vec<Sample>> {
    items.par_iter().map(f).collect()
}

/// `Kaz(f * g) = Kaz(f) * Kaz(g)` on `F -> F'`.
///
/// When the window basis has at most `EXHAUSTIVE_PAIR_LIMIT` pairs every pair
/// is tested. Otherwise the family is `(t_{varpi_lambda}, t_{z varpi_mu})`
/// over the window and `z` in `GL_n(o/p^m)`; by `t_{x a y} = t_x t_a t_y` this
/// covers every product up to unit translations. Seeded random basis pairs
/// are added in both cases.
pub fn check_kaz_hom(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    cfg.check_precision(cfg.m)?;
    let pair = ClosePair::standard(cfg.pair_mode, cfg.p, cfg.m)?;
    let field = cfg.field()?;
    let f = HeckeAlgebra::new(Arc::new(Side::new("F", pair.f.clone(), cfg.m, cfg.n)?), field.clone())?;
    let f2 = HeckeAlgebra::new(Arc::new(Side::new("F'", pair.f2.clone(), cfg.m, cfg.n)?), field)?;
    let kaz = Transfer::new(f.clone(), f2.clone(), Arc::new(pair.lambda.clone()))?;
    let cochars = cfg.cochars();
    let basis = enumerate_labels(f.side(), &cochars, cfg.budget)?;
    let mut rng = cfg.rng();
    let mut pairs: Vec<(CosetLabel, CosetLabel)> = Vec::new();
    if basis.len() * basis.len() <= EXHAUSTIVE_PAIR_LIMIT {
        for a in &basis {
            for b in &basis {
                pairs.push((a.clone(), b.clone()));
            }
        }
    } else {
        let zs = level_elements(f.side(), LEVEL_SAMPLE_CAP, &mut rng);
        for lam in &cochars {
            for mu in &cochars {
                for z in &zs {
                    pairs.push((CosetLabel::diagonal(lam), CosetLabel::translate(mu, z)));
                }
            }
        }
    }
    for _ in 0..cfg.samples {
        pairs.push((basis.choose(&mut rng).unwrap().clone(), basis.choose(&mut rng).unwrap().clone()));
    }
    let side = f.side().clone();
    let samples = run_parallel(&pairs, |(a, b)| {
        let ta = HeckeElement::basis(&f, a)?;
        let tb = HeckeElement::basis(&f, b)?;
        let lhs = kaz.apply(&ta.convolve(&tb)?)?;
        let rhs = kaz.apply(&ta)?.convolve(&kaz.apply(&tb)?)?;
        sample(json!({"f": side.label_to_json(a), "g": side.label_to_json(b)}), &lhs, &rhs)
    })?;
    Ok(Report::new("check kaz-hom", cfg, samples))
}

/// `Kaz(sigma f) = sigma' Kaz(f)` on `E -> E'`, for `t_{varpi_mu}` over the
/// window and seeded random basis elements.
pub fn check_galois_equivariance(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    cfg.check_precision(d.e.side().level())?;
    let cochars = cfg.cochars();
    let mut labels: Vec<CosetLabel> = cochars.iter().map(|mu| CosetLabel::diagonal(mu)).collect();
    let mut rng = cfg.rng();
    for _ in 0..cfg.samples {
        labels.push(random_label(d.e.side(), &cochars, &mut rng));
    }
    let side = d.e.side().clone();
    let samples = run_parallel(&labels, |label| {
        let t = HeckeElement::basis(&d.e, label)?;
        let lhs = d.kaz_e.apply(&sigma_act(&d.pair.sigma, &t)?)?;
        let rhs = sigma_act(&d.pair.sigma2, &d.kaz_e.apply(&t)?)?;
        sample(json!({"f": side.label_to_json(label)}), &lhs, &rhs)
    })?;
    Ok(Report::new("check galois-equivariance", cfg, samples))
}

/// `Kaz_m^F(Br(h)) = Br'(Kaz_{em}^E(h))` for `sigma`-orbit sums `h` of
/// `t_{varpi_mu}` (window over `E`), of `t_{iota(x)}` for every `F` double
/// coset whose image lies in the window, and of seeded random `E` labels.
pub fn check_main_diagram(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let d = cfg.diagram()?;
    cfg.check_precision(d.e.side().level())?;
    let cochars = cfg.cochars();
    let e = d.pair.e;
    let mut labels: Vec<CosetLabel> = cochars.iter().map(|mu| CosetLabel::diagonal(mu)).collect();
    for nu in Window::spread(cfg.window / e).cochars(cfg.n) {
        for h in labels_with_invariant(d.f.side(), &nu, cfg.budget)?.values() {
            labels.push(d.e.side().canonical_label(&d.br.embed_key(h)?)?);
        }
    }
    let mut rng = cfg.rng();
    for _ in 0..cfg.samples {
        labels.push(random_label(d.e.side(), &cochars, &mut rng));
    }
    let side = d.e.side().clone();
    let samples = run_parallel(&labels, |label| {
        let h = sigma_orbit_sum(&d.pair.sigma, &d.e, label)?;
        let lhs = d.kaz_f.apply(&d.br.restrict(&h, None)?)?;
        let rhs = d.br2.restrict(&d.kaz_e.apply(&h)?, None)?;
        sample(json!({"orbitOf": side.label_to_json(label)}), &lhs, &rhs)
    })?;
    Ok(Report::new("check main-diagram", cfg, samples))
}

pub const LEMMA_CONV_ELEMENTS: usize = 20;

/// `t_{varpi_lambda} * t_{varpi_mu} = t_{varpi_{lambda+mu}}` for all window
/// pairs, and `t_{x1 varpi_lambda x2} = t_{x1} * t_{varpi_lambda} * t_{x2}` for
/// `x1`, `x2` among 20 seeded elements of `GL_n(o/p^m)`.
pub fn check_lemma_conv(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    cfg.check_precision(cfg.m)?;
    let fam = Arc::new(crate::ring::RingFamily::new(&crate::ring::RingSpec::mixed(cfg.p, cfg.m))?);
    let side = Arc::new(Side::new("F", fam, cfg.m, cfg.n)?);
    let alg = HeckeAlgebra::new(side.clone(), cfg.field()?)?;
    let cochars = cfg.cochars();
    let mut rng = cfg.rng();
    let xs = level_elements(&side, LEMMA_CONV_ELEMENTS, &mut rng);
    enum Case {
        Add(Vec<i64>, Vec<i64>),
        Translate(Vec<u32>, Vec<i64>, Vec<u32>),
    }
    let mut cases = Vec::new();
    for a in &cochars {
        for b in &cochars {
            cases.push(Case::Add(a.clone(), b.clone()));
        }
    }
    for x1 in &xs {
        for x2 in &xs {
            for lam in &cochars {
                cases.push(Case::Translate(x1.clone(), lam.clone(), x2.clone()));
            }
        }
    }
    let r = side.level_ring().clone();
    let n = cfg.n;
    let samples = run_parallel(&cases, |c| match c {
        Case::Add(a, b) => {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let lhs = HeckeElement::basis(&alg, &CosetLabel::diagonal(a))?
                .convolve(&HeckeElement::basis(&alg, &CosetLabel::diagonal(b))?)?;
            let rhs = HeckeElement::basis(&alg, &CosetLabel::diagonal(&sum))?;
            sample(json!({"lambda": a, "mu": b}), &lhs, &rhs)
        }
        Case::Translate(x1, lam, x2) => {
            let x2inv = GroupMatrix::integral(r.clone(), n, x2.clone()).inverse_integral()?.data().to_vec();
            let zero = vec![0; n];
            let label = CosetLabel { mu: lam.clone(), p: x1.clone(), q: x2inv };
            let lhs = HeckeElement::basis(&alg, &label)?;
            let rhs = HeckeElement::basis(&alg, &CosetLabel::translate(&zero, x1))?
                .convolve(&HeckeElement::basis(&alg, &CosetLabel::diagonal(lam))?)?
                .convolve(&HeckeElement::basis(&alg, &CosetLabel::translate(&zero, x2))?)?;
            let json_mat = |x: &Vec<u32>| -> Vec<Vec<Vec<u32>>> {
                (0..n).map(|i| (0..n).map(|j| r.to_coords(x[i * n + j])).collect()).collect()
            };
            sample(json!({"x1": json_mat(x1), "lambda": lam, "x2": json_mat(x2)}), &lhs, &rhs)
        }
    })?;
    Ok(Report::new("check lemma-conv", cfg, samples))
}
