use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::kazhdan::{random_label, Diagram};
use crate::lattice::Window;

use super::cohomology::tate_module;
use super::linalg::Mat;
use super::meataxe::{composition_factors, is_isomorphic};
use super::module::{CyclicModule, ModuleJson};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkageVerdict {
    pub i: u8,
    pub linked: bool,
    pub tate_dim: usize,
    pub factor_dims: Vec<usize>,
    /// Degree of the coefficient field over `F_l`; the Frobenius twist is
    /// trivial when it is 1.
    pub field_degree: u32,
}

/// `xi` is a module for the `E`-side algebra with `T` the action of `σ`,
/// `rho` a module for the `F`-side algebra, and `br_map` sends each
/// generator name of `xi` to the name of its Brauer image in `rho`. For
/// `i = 0, 1`, `rho` is linked when its Frobenius twist, pulled back along
/// `br_map`, is a composition factor of `Ĥ^i(xi)`.
pub fn linkage_check(
    xi: &CyclicModule,
    rho: &CyclicModule,
    br_map: &BTreeMap<String, String>,
    bound: usize,
) -> Result<Vec<LinkageVerdict>> {
    if *xi.field != *rho.field {
        return Err(Error::NotCompatible("xi and rho have different coefficient fields".into()));
    }
    let rho_action = rho.action()?;
    let mut pulled = BTreeMap::new();
    for name in xi.action()?.keys() {
        let target = br_map
            .get(name)
            .ok_or_else(|| Error::GeneratorNameMismatch(format!("no Brauer image for {name}")))?;
        let m = rho_action
            .get(target)
            .ok_or_else(|| Error::GeneratorNameMismatch(format!("rho has no generator {target}")))?;
        pulled.insert(name.clone(), m.clone());
    }
    let twisted = CyclicModule::trivial(rho.field.clone(), pulled, rho.dim)?.frobenius_twist();
    let mut out = Vec::new();
    for i in 0..2 {
        let h = tate_module(xi, i)?;
        let factors = composition_factors(&h, bound)?;
        let mut linked = false;
        for fac in &factors {
            if is_isomorphic(fac, &twisted)? {
                linked = true;
                break;
            }
        }
        out.push(LinkageVerdict {
            i,
            linked,
            tate_dim: h.dim,
            factor_dims: factors.iter().map(|f| f.dim).collect(),
            field_degree: xi.field.degree(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LinkageInput {
    pub xi: CyclicModule,
    pub rho: CyclicModule,
    pub br_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkageInputJson {
    pub xi: ModuleJson,
    pub rho: ModuleJson,
    pub br_map: BTreeMap<String, String>,
}

impl LinkageInput {
    pub fn check(&self, bound: usize) -> Result<Vec<LinkageVerdict>> {
        linkage_check(&self.xi, &self.rho, &self.br_map, bound)
    }

    pub fn to_json(&self) -> LinkageInputJson {
        LinkageInputJson { xi: self.xi.to_json(), rho: self.rho.to_json(), br_map: self.br_map.clone() }
    }

    pub fn from_json(json: &LinkageInputJson) -> Result<LinkageInput> {
        Ok(LinkageInput {
            xi: CyclicModule::from_json(&json.xi)?,
            rho: CyclicModule::from_json(&json.rho)?,
            br_map: json.br_map.clone(),
        })
    }
}

/// Generator name of a Hecke algebra element: its side and its sorted terms.
pub fn element_name(h: &HeckeElement) -> Result<String> {
    Ok(format!("{}:{}", h.side().name(), serde_json::to_string(&h.to_json()?.terms)?))
}

/// A linkage problem on `E`, `F` and its transport to `E'`, `F'` through
/// the Kazhdan transfers.
#[derive(Debug, Clone)]
pub struct LinkageInstance {
    pub source: LinkageInput,
    pub transported: LinkageInput,
}

const GENERATORS_PER_INSTANCE: usize = 2;
const GENERATOR_DRAWS: usize = 200;

/// Seeded linkage problems. Generators are the `E` basis elements of double
/// cosets through random `F` points (σ-stable, with distinct nonzero Brauer
/// images). `xi` is a permutation module for `T` carrying `T`-averaged
/// random operators; `rho` is the untwist of a factor of `Ĥ^0(xi)` on even
/// instances and random on odd ones.
pub fn linkage_instances(d: &Diagram, count: usize, seed: u64) -> Result<Vec<LinkageInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = d.e.field().clone();
    let l = field.characteristic() as usize;
    let n = d.f.side().n();
    let cochars = Window { min: 0, max: 1 }.cochars(n);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut gens: Vec<(HeckeElement, HeckeElement)> = Vec::new();
        let mut seen = Vec::new();
        for _ in 0..GENERATOR_DRAWS {
            if gens.len() == GENERATORS_PER_INSTANCE {
                break;
            }
            let label = random_label(d.f.side(), &cochars, &mut rng);
            let h = HeckeElement::from_key(&d.e, d.br.embed_key(&label)?, 1);
            let b = d.br.restrict(&h, None)?;
            if b.is_zero() || seen.contains(&b) {
                continue;
            }
            seen.push(b.clone());
            gens.push((h, b));
        }
        if gens.is_empty() {
            return Err(Error::Undecided("no σ-invariant generator with nonzero Brauer image".into()));
        }

        let cycles = rng.gen_range(1..=2usize);
        let fixed = rng.gen_range(1..=(8 - cycles * l).clamp(1, 3));
        let dim = cycles * l + fixed;
        let mut t = Mat::zero(dim, dim);
        for c in 0..cycles {
            for i in 0..l {
                t.set(c * l + (i + 1) % l, c * l + i, 1);
            }
        }
        for i in cycles * l..dim {
            t.set(i, i, 1);
        }
        let t_inv = t.transpose();
        let q = field.size();
        let mut action = BTreeMap::new();
        let mut br_map = BTreeMap::new();
        for (h, b) in &gens {
            let y = Mat { rows: dim, cols: dim, data: (0..dim * dim).map(|_| rng.gen_range(0..q)).collect() };
            let mut avg = Mat::zero(dim, dim);
            let (mut tp, mut tq) = (Mat::identity(dim), Mat::identity(dim));
            for _ in 0..l {
                avg = avg.add(&field, &tp.mul(&field, &y).mul(&field, &tq));
                tp = tp.mul(&field, &t);
                tq = tq.mul(&field, &t_inv);
            }
            action.insert(element_name(h)?, avg);
            br_map.insert(element_name(h)?, element_name(b)?);
        }
        let xi = CyclicModule::new(field.clone(), t, Some(action))?;

        let h0 = tate_module(&xi, 0)?;
        let factor = composition_factors(&h0, super::meataxe::DEFAULT_DIM_BOUND)?.into_iter().next();
        let rho_dim = factor.as_ref().map_or(1, |f| f.dim);
        let mut rho_action = BTreeMap::new();
        for (name, target) in &br_map {
            let m = match (&factor, idx % 2) {
                (Some(fac), 0) => fac.action()?[name].map(|x| field.frobenius(x)),
                _ => Mat {
                    rows: rho_dim,
                    cols: rho_dim,
                    data: (0..rho_dim * rho_dim).map(|_| rng.gen_range(0..q)).collect(),
                },
            };
            rho_action.entry(target.clone()).or_insert(m);
        }
        let rho = CyclicModule::trivial(field.clone(), rho_action, rho_dim)?;
        let source = LinkageInput { xi, rho, br_map };

        let mut e_names = BTreeMap::new();
        let mut f_names = BTreeMap::new();
        let mut br_map2 = BTreeMap::new();
        for (h, b) in &gens {
            let h2 = d.kaz_e.apply(h)?;
            let b2 = d.kaz_f.apply(b)?;
            let h2_name = element_name(&h2)?;
            e_names.insert(element_name(h)?, h2_name.clone());
            f_names.insert(element_name(b)?, element_name(&b2)?);
            br_map2.insert(h2_name, element_name(&d.br2.restrict(&h2, None)?)?);
        }
        let transported = LinkageInput {
            xi: source.xi.transport(&e_names)?,
            rho: source.rho.transport(&f_names)?,
            br_map: br_map2,
        };
        out.push(LinkageInstance { source, transported });
    }
    Ok(out)
}
