use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Elem;

use super::coset::{spread, DoubleKey, Side};
use super::matrix::mat_mul;

/// `(mu, P, Q)` naming the double coset of `lift(P) varpi_mu lift(Q)^{-1}`;
/// `P`, `Q` are row-major over the level ring of the side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetLabel {
    pub mu: Vec<i64>,
    #[serde(rename = "P")]
    pub p: Vec<Elem>,
    #[serde(rename = "Q")]
    pub q: Vec<Elem>,
}

impl CosetLabel {
    pub fn diagonal(mu: &[i64]) -> CosetLabel {
        let n = mu.len();
        let mut id = vec![0; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        CosetLabel { mu: mu.to_vec(), p: id.clone(), q: id }
    }

    /// Label of `z varpi_mu` for `z` in `GL_n(o/pi^level)`.
    pub fn translate(mu: &[i64], z: &[Elem]) -> CosetLabel {
        let mut l = Self::diagonal(mu);
        l.p = z.to_vec();
        l
    }
}

/// JSON form: `{mu, P, Q, level}` with matrix entries as ring coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelJson {
    pub mu: Vec<i64>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Vec<u32>>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<Vec<u32>>>,
    pub level: u32,
}

impl Side {
    pub fn label_to_json(&self, label: &CosetLabel) -> LabelJson {
        let r = self.level_ring();
        let n = self.n();
        let mat = |m: &[Elem]| -> Vec<Vec<Vec<u32>>> {
            (0..n).map(|i| (0..n).map(|j| r.to_coords(m[i * n + j])).collect()).collect()
        };
        LabelJson { mu: label.mu.clone(), p: mat(&label.p), q: mat(&label.q), level: self.level() }
    }

    pub fn label_from_json(&self, json: &LabelJson) -> Result<CosetLabel> {
        if json.level != self.level() {
            return Err(Error::SideMismatch(format!(
                "label at level {} on a side of level {}",
                json.level,
                self.level()
            )));
        }
        let r = self.level_ring();
        let n = self.n();
        let mat = |m: &Vec<Vec<Vec<u32>>>| -> Result<Vec<Elem>> {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::Parse("label matrix has the wrong shape".into()));
            }
            m.iter().flatten().map(|c| r.from_coords(c)).collect()
        };
        Ok(CosetLabel { mu: json.mu.clone(), p: mat(&json.p)?, q: mat(&json.q)? })
    }
}

/// Inclusive bounds on the entries of non-decreasing cocharacters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    /// Entries in `[0, s]`.
    pub fn spread(s: u32) -> Window {
        Window { min: 0, max: s as i64 }
    }

    pub fn cochars(&self, n: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(lo: i64, hi: i64, n: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().copied().unwrap_or(lo);
            for v in start..=hi {
                cur.push(v);
                rec(lo, hi, n, cur, out);
                cur.pop();
            }
        }
        if self.min <= self.max {
            rec(self.min, self.max, n, &mut cur, &mut out);
        }
        out
    }

    pub fn contains(&self, mu: &[i64]) -> bool {
        mu.iter().all(|&v| self.min <= v && v <= self.max)
    }
}

/// `n_C = level + max spread` over the window.
pub fn required_precision(cochars: &[Vec<i64>], level: u32) -> u32 {
    level + cochars.iter().map(|mu| spread(mu)).max().unwrap_or(0)
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// One label per double coset with Cartan invariant among `cochars`,
/// sorted by `(mu, P, Q)`.
pub fn enumerate_labels(side: &Side, cochars: &[Vec<i64>], budget: u64) -> Result<Vec<CosetLabel>> {
    let mut out = Vec::new();
    for mu in cochars {
        out.extend(labels_with_invariant(side, mu, budget)?.into_values());
    }
    out.sort();
    Ok(out)
}

fn check_budget(side: &Side, budget: u64) -> Result<()> {
    let s = side.level_ring().size() as u64;
    let approx = s.saturating_pow((side.n() * side.n()) as u32);
    let required = approx.saturating_mul(approx);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Right cosets `g H` of a subgroup of `GL_n(o/pi^level)` given by a
/// membership predicate; each coset is represented by its smallest element.
fn coset_reps(side: &Side, member: impl Fn(&[Elem]) -> bool) -> Vec<Vec<Elem>> {
    let r = side.level_ring();
    let n = side.n();
    let group = side.level_group();
    let sub: Vec<&Vec<Elem>> = group.iter().filter(|g| member(g)).collect();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut reps = Vec::new();
    for g in group {
        if seen.contains(g) {
            continue;
        }
        reps.push(g.clone());
        for h in &sub {
            seen.insert(mat_mul(r, g, h, n));
        }
    }
    reps
}

/// Double cosets with invariant `mu`, keyed canonically.
///
/// `(x, y)` and `(x g, y h)` name the same double coset exactly when
/// `g varpi_mu h^{-1}` lies in `K varpi_mu K`, i.e. `g = a`, `h = varpi_mu^{-1} a varpi_mu`
/// mod `pi^level` for some `a` in `G(o) ∩ varpi_mu G(o) varpi_mu^{-1}`. So labels are
/// `y` over `G / P` with `P = {b : b_ij ≡ 0 mod pi^{min(level, mu_j - mu_i)}, i < j}`
/// and `x` over `G / N` with `N` the upper unitriangular `a` having
/// `a_ij ≡ 0 mod pi^{level - (mu_j - mu_i)}`.
pub fn labels_with_invariant(side: &Side, mu: &[i64], budget: u64) -> Result<BTreeMap<DoubleKey, CosetLabel>> {
    check_budget(side, budget)?;
    let n = side.n();
    if mu.len() != n || mu.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::SpecMismatch("cocharacter is not non-decreasing of the side's rank".into()));
    }
    let r = side.level_ring().clone();
    let level = side.level() as i64;
    let gap = |i: usize, j: usize| mu[j] - mu[i];
    let ys = coset_reps(side, |b| {
        (0..n).all(|i| (i + 1..n).all(|j| r.valuation(b[i * n + j]) as i64 >= gap(i, j).min(level)))
    });
    let xs = coset_reps(side, |a| {
        (0..n).all(|i| {
            (0..n).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => a[i * n + j] == 1,
                std::cmp::Ordering::Greater => a[i * n + j] == 0,
                std::cmp::Ordering::Less => r.valuation(a[i * n + j]) as i64 >= (level - gap(i, j)).max(0),
            })
        })
    });
    let labels: Vec<CosetLabel> = ys
        .iter()
        .flat_map(|y| xs.iter().map(move |x| CosetLabel { mu: mu.to_vec(), p: x.clone(), q: y.clone() }))
        .collect();
    let keyed: Vec<(DoubleKey, CosetLabel)> = labels
        .par_iter()
        .map(|l| {
            let k = side.double_key(l)?;
            let c = side.canonical_label(&k)?;
            Ok((k, c))
        })
        .collect::<Result<_>>()?;
    let found: BTreeMap<DoubleKey, CosetLabel> = keyed.into_iter().collect();
    debug_assert_eq!(found.len(), labels.len(), "distinct label pairs name distinct double cosets");
    Ok(found)
}

/// `Gamma_mu`: pairs `(x, y)` of `GL_n(o/pi^level)` with
/// `x varpi_mu y^{-1}` in `K varpi_mu K`.
pub fn gamma_stabilizer(side: &Side, mu: &[i64], budget: u64) -> Result<Vec<(Vec<Elem>, Vec<Elem>)>> {
    check_budget(side, budget)?;
    let target = side.double_key(&CosetLabel::diagonal(mu))?;
    let group = side.level_group();
    let mut out = Vec::new();
    for x in group {
        for y in group {
            let label = CosetLabel { mu: mu.to_vec(), p: x.clone(), q: y.clone() };
            if side.double_key(&label)? == target {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}
