use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingFamily};

use super::cartan::smith_cartan;
use super::label::CosetLabel;
use super::matrix::{identity_data, mat_mul, unimodular_inverse, GroupMatrix};

/// Canonical name of a left coset `gK`: the Hermite form of `g GL_n(o)` and
/// the class of the cofactor in `GL_n(o/pi^level)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeftKey(pub Vec<i64>);

/// Canonical name of a double coset `KgK`: its Cartan invariant and the
/// smallest left-coset key it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubleKey {
    pub mu: Vec<i64>,
    pub left: LeftKey,
}

/// `sum_i (mu_i - mu_1)`: total elementary-divisor depth above the content.
pub fn depth(mu: &[i64]) -> u32 {
    let base = mu.iter().copied().min().unwrap_or(0);
    mu.iter().map(|&m| (m - base) as u32).sum()
}

pub fn spread(mu: &[i64]) -> u32 {
    match (mu.iter().min(), mu.iter().max()) {
        (Some(a), Some(b)) => (b - a) as u32,
        _ => 0,
    }
}

/// One local field seen through `GL_n` and its principal congruence
/// subgroup `K` of the given level (in units of the field's own uniformizer).
#[derive(Debug)]
pub struct Side {
    name: String,
    family: Arc<RingFamily>,
    level: u32,
    n: usize,
    level_ring: Arc<Ring>,
    dkeys: Mutex<HashMap<CosetLabel, DoubleKey>>,
    labels: Mutex<HashMap<DoubleKey, CosetLabel>>,
    group: OnceLock<Vec<Vec<Elem>>>,
}

impl Side {
    pub fn new(name: &str, family: Arc<RingFamily>, level: u32, n: usize) -> Result<Side> {
        if level == 0 {
            return Err(Error::ConfigInvalid("congruence level must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::ConfigInvalid("matrix rank must be at least 1".into()));
        }
        let level_ring = family.at_pi_precision(level)?;
        if level_ring.precision() != level {
            return Err(Error::ConfigInvalid(format!(
                "level {level} is not a multiple of the ramification index {}",
                family.ramification()
            )));
        }
        Ok(Side {
            name: name.to_string(),
            family,
            level,
            n,
            level_ring,
            dkeys: Mutex::new(HashMap::new()),
            labels: Mutex::new(HashMap::new()),
            group: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn family(&self) -> &Arc<RingFamily> {
        &self.family
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn level_ring(&self) -> &Arc<Ring> {
        &self.level_ring
    }

    /// Same field, level and rank.
    pub fn compatible(&self, other: &Side) -> bool {
        self.name == other.name
            && self.level == other.level
            && self.n == other.n
            && self.family.spec() == other.family.spec()
    }

    /// Smallest ring of the family with `pi`-adic precision at least `prec`.
    pub fn work_ring(&self, prec: u32) -> Result<Arc<Ring>> {
        self.family.at_pi_precision(prec.max(self.level))
    }

    /// Precision needed to classify products of elements whose Cartan
    /// invariants have the given depths.
    pub fn product_precision(&self, depths: &[u32]) -> u32 {
        self.level + depths.iter().sum::<u32>()
    }

    // ---- left cosets ----

    pub fn left_key(&self, g: &GroupMatrix) -> Result<LeftKey> {
        if g.n() != self.n {
            return Err(Error::SpecMismatch("matrix rank differs from the side".into()));
        }
        let g = g.normalized();
        let r = g.ring().clone();
        let n = self.n;
        let prec = g.precision();
        let mut a = g.data().to_vec();
        let mut u = identity_data(n);
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            let mut best: Option<(u32, usize)> = None;
            for j in i..n {
                let v = r.valuation(a[i * n + j]).min(prec);
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
            let (v, pj) = best.unwrap();
            if v >= prec {
                return Err(Error::InsufficientPrecision { needed: v + 1, available: prec });
            }
            if pj != i {
                for row in 0..n {
                    a.swap(row * n + pj, row * n + i);
                }
                for col in 0..n {
                    u.swap(pj * n + col, i * n + col);
                }
            }
            let unit = r.div_pi_pow(a[i * n + i], v);
            let uinv = r.inv_unit(unit)?;
            for row in i..n {
                a[row * n + i] = r.reduce(r.mul(a[row * n + i], uinv), prec as i64);
            }
            a[i * n + i] = r.pi_pow(v);
            for col in 0..n {
                u[i * n + col] = r.mul(u[i * n + col], unit);
            }
            for j in i + 1..n {
                let b = a[i * n + j];
                if b == 0 {
                    continue;
                }
                let f = r.div_pi_pow(b, v);
                for row in i..n {
                    a[row * n + j] = r.reduce(r.sub(a[row * n + j], r.mul(f, a[row * n + i])), prec as i64);
                }
                a[i * n + j] = 0;
                for col in 0..n {
                    u[i * n + col] = r.add(u[i * n + col], r.mul(f, u[j * n + col]));
                }
            }
            d.push(v);
        }
        let total: u32 = d.iter().sum();
        if prec < self.level + total {
            return Err(Error::InsufficientPrecision { needed: self.level + total, available: prec });
        }
        for i in 1..n {
            for j in 0..i {
                let h = a[i * n + j];
                let rem = r.reduce(h, d[i] as i64);
                if rem == h {
                    continue;
                }
                let q = r.div_pi_pow(r.sub(h, rem), d[i]);
                for row in i..n {
                    a[row * n + j] = r.reduce(r.sub(a[row * n + j], r.mul(q, a[row * n + i])), prec as i64);
                }
                a[i * n + j] = rem;
                for col in 0..n {
                    u[i * n + col] = r.add(u[i * n + col], r.mul(q, u[j * n + col]));
                }
            }
        }
        let mut key = Vec::with_capacity(1 + n + n * n);
        key.push(g.shift());
        key.extend(d.iter().map(|&v| v as i64));
        for i in 1..n {
            for j in 0..i {
                let digits = r.pi_digits(a[i * n + j]);
                key.extend(digits.iter().take(d[i] as usize).map(|&c| c as i64));
            }
        }
        key.extend(u.iter().map(|&x| r.transfer(x, &self.level_ring) as i64));
        Ok(LeftKey(key))
    }

    /// An element of the left coset named by `key`, exact at precision
    /// `level + depth`.
    pub fn left_key_element(&self, key: &LeftKey) -> Result<GroupMatrix> {
        let n = self.n;
        let k = &key.0;
        let shift = k[0];
        let d: Vec<u32> = k[1..=n].iter().map(|&v| v as u32).collect();
        let total: u32 = d.iter().sum();
        let ring = self.work_ring(self.level + total)?;
        let mut h = vec![0; n * n];
        let mut pos = n + 1;
        for i in 0..n {
            h[i * n + i] = ring.pi_pow(d[i]);
        }
        for i in 1..n {
            for j in 0..i {
                let mut x = ring.zero();
                for t in 0..d[i] {
                    let term = ring.mul(ring.residue_rep(k[pos] as u32), ring.pi_pow(t));
                    x = ring.add(x, term);
                    pos += 1;
                }
                h[i * n + j] = x;
            }
        }
        let u: Vec<Elem> = k[pos..pos + n * n].iter().map(|&x| self.level_ring.transfer(x as Elem, &ring)).collect();
        let data = mat_mul(&ring, &h, &u, n);
        Ok(GroupMatrix::from_parts(ring.clone(), n, shift, ring.precision(), data))
    }

    // ---- labels and double cosets ----

    /// Label `(mu, x mod pi^level, y mod pi^level)` of the double coset of `g`.
    pub fn cartan_label(&self, g: &GroupMatrix) -> Result<CosetLabel> {
        let gn = g.normalized();
        let c = smith_cartan(&gn)?;
        let need = self.level + spread(&c.mu);
        if gn.precision() < need {
            return Err(Error::InsufficientPrecision { needed: need, available: gn.precision() });
        }
        Ok(CosetLabel {
            mu: c.mu,
            p: c.x.data().iter().map(|&v| gn.ring().transfer(v, &self.level_ring)).collect(),
            q: c.y.data().iter().map(|&v| gn.ring().transfer(v, &self.level_ring)).collect(),
        })
    }

    fn check_label(&self, label: &CosetLabel) -> Result<()> {
        let n = self.n;
        if label.mu.len() != n || label.p.len() != n * n || label.q.len() != n * n {
            return Err(Error::SpecMismatch("label shape does not match the side".into()));
        }
        if label.mu.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::SpecMismatch("cocharacter is not non-decreasing".into()));
        }
        let s = self.level_ring.size();
        if label.p.iter().chain(&label.q).any(|&x| x >= s) {
            return Err(Error::SpecMismatch("label entry outside the level ring".into()));
        }
        for m in [&label.p, &label.q] {
            if unimodular_inverse(&self.level_ring, m, n).is_err() {
                return Err(Error::SpecMismatch("label matrix is not invertible".into()));
            }
        }
        Ok(())
    }

    /// `lift(P) * varpi_mu * lift(Q)^{-1}` at `pi`-adic precision `prec`.
    pub fn label_element(&self, label: &CosetLabel, prec: u32) -> Result<GroupMatrix> {
        self.check_label(label)?;
        let ring = self.work_ring(prec)?;
        let n = self.n;
        let x = GroupMatrix::integral(self.level_ring.clone(), n, label.p.clone()).lift_exact(&ring);
        let y = GroupMatrix::integral(self.level_ring.clone(), n, label.q.clone()).lift_exact(&ring);
        let d = GroupMatrix::diag_pi(ring.clone(), &label.mu);
        Ok(x.mul(&d).mul(&y.inverse_integral()?))
    }

    /// Lower unitriangular `u` with `u_ij` in `pi^level * reps(o/pi^{mu_i - mu_j})`.
    fn transversal(&self, mu: &[i64], ring: &Ring) -> Vec<Vec<Elem>> {
        let n = self.n;
        let scale = ring.pi_pow(self.level);
        let mut out = vec![identity_data(n)];
        for i in 1..n {
            for j in 0..i {
                let reps = ring.reps_mod((mu[i] - mu[j]) as u32);
                let mut next = Vec::with_capacity(out.len() * reps.len());
                for u in &out {
                    for &rep in &reps {
                        let mut v = u.clone();
                        v[i * n + j] = ring.mul(scale, rep);
                        next.push(v);
                    }
                }
                out = next;
            }
        }
        out
    }

    /// `[K : K ∩ varpi_mu K varpi_mu^{-1}] = q^{sum_{i>j}(mu_i - mu_j)}`.
    pub fn coset_count(&self, mu: &[i64]) -> u64 {
        let q = self.level_ring.residue_size() as u64;
        let mut e = 0u32;
        for i in 0..mu.len() {
            for j in 0..i {
                e += (mu[i] - mu[j]) as u32;
            }
        }
        q.pow(e)
    }

    /// Left coset representatives of the double coset of `label`, at
    /// `pi`-adic precision at least `prec` (raised to `level + depth`).
    pub fn left_reps(&self, label: &CosetLabel, prec: u32) -> Result<Vec<GroupMatrix>> {
        self.check_label(label)?;
        let prec = prec.max(self.level + depth(&label.mu));
        let ring = self.work_ring(prec)?;
        let n = self.n;
        let x = GroupMatrix::integral(self.level_ring.clone(), n, label.p.clone()).lift_exact(&ring);
        let yinv = GroupMatrix::integral(self.level_ring.clone(), n, label.q.clone())
            .lift_exact(&ring)
            .inverse_integral()?;
        let d = GroupMatrix::diag_pi(ring.clone(), &label.mu);
        let dy = d.mul(&yinv);
        let reps: Vec<GroupMatrix> = self
            .transversal(&label.mu, &ring)
            .into_iter()
            .map(|u| x.mul(&GroupMatrix::integral(ring.clone(), n, u)).mul(&dy))
            .collect();
        if n <= 2 {
            return Ok(reps);
        }
        let expected = self.coset_count(&label.mu);
        let keys: HashSet<LeftKey> = reps.iter().map(|g| self.left_key(g)).collect::<Result<_>>()?;
        if keys.len() as u64 == expected {
            return Ok(reps);
        }
        self.orbit_closure(&reps[0], &ring, expected)
    }

    /// Left cosets `k g K` for `k` in `K`, by closing under elementary
    /// generators of `K`.
    fn orbit_closure(&self, g: &GroupMatrix, ring: &Arc<Ring>, expected: u64) -> Result<Vec<GroupMatrix>> {
        let n = self.n;
        let mut gens = Vec::new();
        let residues: Vec<Elem> = (1..ring.residue_size()).map(|c| ring.residue_rep(c)).collect();
        for k in self.level..ring.precision() {
            let scale = ring.pi_pow(k);
            for &c in &residues {
                let e = ring.mul(scale, c);
                for i in 0..n {
                    for j in 0..n {
                        let mut m = identity_data(n);
                        m[i * n + j] = ring.add(m[i * n + j], e);
                        gens.push(GroupMatrix::integral(ring.clone(), n, m));
                    }
                }
            }
        }
        let mut seen: HashSet<LeftKey> = HashSet::new();
        let mut out = vec![g.clone()];
        seen.insert(self.left_key(g)?);
        let mut frontier = 0;
        while frontier < out.len() {
            let cur = out[frontier].clone();
            frontier += 1;
            for k in &gens {
                let h = k.mul(&cur);
                if seen.insert(self.left_key(&h)?) {
                    out.push(h);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, expected);
        Ok(out)
    }

    /// Canonical key of the double coset named by `label`.
    pub fn double_key(&self, label: &CosetLabel) -> Result<DoubleKey> {
        if let Some(k) = self.dkeys.lock().unwrap().get(label) {
            return Ok(k.clone());
        }
        let reps = self.left_reps(label, 0)?;
        let mut best: Option<LeftKey> = None;
        for g in &reps {
            let k = self.left_key(g)?;
            if best.as_ref().map_or(true, |b| k < *b) {
                best = Some(k);
            }
        }
        let key = DoubleKey { mu: label.mu.clone(), left: best.unwrap() };
        self.dkeys.lock().unwrap().insert(label.clone(), key.clone());
        Ok(key)
    }

    /// All left-coset keys of the double coset of `label`.
    pub fn left_keys(&self, label: &CosetLabel) -> Result<BTreeSet<LeftKey>> {
        self.left_reps(label, 0)?.iter().map(|g| self.left_key(g)).collect()
    }

    pub fn double_key_of(&self, g: &GroupMatrix) -> Result<DoubleKey> {
        self.double_key(&self.cartan_label(g)?)
    }

    /// Deterministic label of a double coset: the Cartan label of the
    /// element named by its smallest left key.
    pub fn canonical_label(&self, key: &DoubleKey) -> Result<CosetLabel> {
        if let Some(l) = self.labels.lock().unwrap().get(key) {
            return Ok(l.clone());
        }
        let z = self.left_key_element(&key.left)?;
        let label = self.cartan_label(&z)?;
        debug_assert_eq!(label.mu, key.mu);
        self.labels.lock().unwrap().insert(key.clone(), label.clone());
        self.dkeys.lock().unwrap().insert(label.clone(), key.clone());
        Ok(label)
    }

    /// `K g K = K h K`: equal Cartan invariants and `h` in some `g_i K`.
    pub fn same_double_coset(&self, g: &GroupMatrix, h: &GroupMatrix) -> Result<bool> {
        let lg = self.cartan_label(g)?;
        let lh = self.cartan_label(h)?;
        if lg.mu != lh.mu {
            return Ok(false);
        }
        let kh = self.left_key(&self.label_element(&lh, self.level + depth(&lh.mu))?)?;
        Ok(self.left_keys(&lg)?.contains(&kh))
    }

    /// Left coset representatives of `K g K`.
    pub fn left_coset_reps(&self, g: &GroupMatrix) -> Result<Vec<GroupMatrix>> {
        let label = self.cartan_label(g)?;
        self.left_reps(&label, g.precision().max(self.level + depth(&label.mu)))
    }

    /// `GL_n(o/pi^level)`, in increasing lexicographic order of entries.
    pub fn level_group(&self) -> &Vec<Vec<Elem>> {
        self.group.get_or_init(|| {
            let r = &self.level_ring;
            let s = r.size() as u64;
            let n2 = (self.n * self.n) as u32;
            let total = s.pow(n2);
            let mut out = Vec::new();
            let mut entries = vec![0u32; self.n * self.n];
            for code in 0..total {
                let mut c = code;
                for slot in entries.iter_mut().rev() {
                    *slot = (c % s) as u32;
                    c /= s;
                }
                // invertible mod pi suffices
                if unimodular_inverse(r, &entries, self.n).is_ok() {
                    out.push(entries.clone());
                }
            }
            out
        })
    }
}
