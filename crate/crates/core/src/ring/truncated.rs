use crate::error::{Error, Result};
use crate::gf::CoeffField;
use crate::poly;

use super::spec::{ExtKind, ExtSpec, Model, RingSpec};

/// An element of a [`Ring`], encoded as a mixed-radix index of its canonical
/// coordinates: base coefficients `x_i` of `T^i` contribute `x_i * B^i`
/// where `B` is the base ring size. Base elements are integers in `[0, p^N)`
/// (MIXED) or `sum a_j p^j` for `sum a_j t^j` (EQUAL).
pub type Elem = u32;

pub const MAX_RING_SIZE: u64 = 1 << 16;
pub const MAX_DEGREE: usize = 8;
const TABLE_LIMIT: u32 = 1024;
const BASE_TABLE_LIMIT: u32 = 256;

#[derive(Debug)]
pub struct Ring {
    spec: RingSpec,
    model: Model,
    p: u32,
    n: u32,
    l: u32,
    kind: Option<ExtKind>,
    e: u32,
    prec: u32,
    bsize: u32,
    size: u32,
    base_add: Option<Vec<u32>>,
    base_mul: Option<Vec<u32>>,
    /// EQUAL: the uniformizer is `t * u`; this is `u^{-1}` (base index).
    unit_inv: Elem,
    varpi: Elem,
    /// Monic defining polynomial of the extension, base indices, little-endian.
    minpoly: Vec<Elem>,
    add_t: Option<Vec<u16>>,
    mul_t: Option<Vec<u16>>,
    val: Vec<u8>,
    inv: Vec<u32>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Ring {}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

impl Ring {
    pub fn new(spec: &RingSpec) -> Result<Ring> {
        spec.validate()?;
        let p = spec.p;
        let n = spec.n;
        let l = spec.degree();
        if l as usize > MAX_DEGREE {
            return Err(Error::ConfigInvalid(format!("extension degree {l} too large")));
        }
        let bsize64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        let size64 = bsize64.checked_pow(l).unwrap_or(u64::MAX);
        if size64 > MAX_RING_SIZE {
            return Err(Error::BudgetExceeded { required: size64, budget: MAX_RING_SIZE });
        }
        let mut spec = spec.clone();
        let kind = spec.ext.as_ref().map(|e| e.kind);
        let e = spec.ramification();
        let mut ring = Ring {
            model: spec.model,
            p,
            n,
            l,
            kind,
            e,
            prec: e * n,
            bsize: bsize64 as u32,
            size: size64 as u32,
            base_add: None,
            base_mul: None,
            unit_inv: 1,
            varpi: 0,
            minpoly: Vec::new(),
            add_t: None,
            mul_t: None,
            val: Vec::new(),
            inv: Vec::new(),
            spec: spec.clone(),
        };
        ring.init_base(&spec)?;
        if let Some(ext) = spec.ext.as_mut() {
            ring.minpoly = ring.defining_poly(ext)?;
        }
        ring.spec = spec;
        ring.init_tables();
        Ok(ring)
    }

    fn init_base(&mut self, spec: &RingSpec) -> Result<()> {
        if self.model == Model::Equal && self.bsize <= BASE_TABLE_LIMIT {
            let b = self.bsize as usize;
            let mut add = vec![0; b * b];
            let mut mul = vec![0; b * b];
            for x in 0..b as u32 {
                for y in 0..b as u32 {
                    add[x as usize * b + y as usize] = self.equal_add(x, y);
                    mul[x as usize * b + y as usize] = self.equal_mul(x, y);
                }
            }
            self.base_add = Some(add);
            self.base_mul = Some(mul);
        }
        match (&spec.uniformizer, self.model) {
            (Some(coeffs), Model::Equal) => {
                let varpi = self.equal_from_digits(coeffs);
                // u = varpi / t
                let u_digits: Vec<u32> = coeffs.iter().skip(1).copied().collect();
                let u = self.equal_from_digits(&u_digits);
                self.varpi = varpi;
                self.unit_inv = self.base_inv_slow(u).ok_or_else(|| {
                    Error::ConfigInvalid("uniformizer is not t times a unit".into())
                })?;
            }
            (_, Model::Equal) => {
                self.varpi = if self.n > 1 { self.p } else { 0 };
            }
            (_, Model::Mixed) => {
                self.varpi = if self.n > 1 { self.p } else { 0 };
            }
        }
        Ok(())
    }

    fn defining_poly(&self, ext: &mut ExtSpec) -> Result<Vec<Elem>> {
        let l = ext.l as usize;
        match ext.kind {
            ExtKind::Ramified => {
                let mut f = vec![0; l + 1];
                f[0] = self.base_neg(self.varpi);
                f[l] = 1;
                Ok(f)
            }
            ExtKind::Unramified => {
                let fp = CoeffField::prime(self.p)?;
                let coeffs = match &ext.minimal_poly {
                    Some(c) => {
                        if c.len() != l + 1 || c[l] != 1 || c.iter().any(|&x| x >= self.p) {
                            return Err(Error::ConfigInvalid(
                                "minimalPoly must be monic of degree l with coefficients below p".into(),
                            ));
                        }
                        if !poly::is_irreducible(&fp, c) {
                            return Err(Error::ConfigInvalid(
                                "minimalPoly is not irreducible modulo p".into(),
                            ));
                        }
                        c.clone()
                    }
                    None => poly::smallest_irreducible(&fp, l),
                };
                ext.minimal_poly = Some(coeffs.clone());
                // digits below p are the same index in both models
                Ok(coeffs)
            }
        }
    }

    fn init_tables(&mut self) {
        let size = self.size;
        if size <= TABLE_LIMIT {
            let s = size as usize;
            let mut add = vec![0u16; s * s];
            let mut mul = vec![0u16; s * s];
            for x in 0..size {
                for y in 0..size {
                    add[x as usize * s + y as usize] = self.add_slow(x, y) as u16;
                    mul[x as usize * s + y as usize] = self.mul_slow(x, y) as u16;
                }
            }
            self.add_t = Some(add);
            self.mul_t = Some(mul);
        }
        self.val = (0..size).map(|x| self.valuation_slow(x) as u8).collect();
        let units = (size - size / self.residue_size()) as u64;
        self.inv = (0..size)
            .map(|x| {
                if self.val[x as usize] == 0 {
                    self.pow(x, units - 1)
                } else {
                    u32::MAX
                }
            })
            .collect();
        debug_assert!((0..size).all(|x| self.val[x as usize] != 0 || self.mul(x, self.inv[x as usize]) == 1));
    }

    // ---- base ring arithmetic on base indices ----

    fn equal_digits(&self, mut x: Elem) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn equal_from_digits(&self, d: &[u32]) -> Elem {
        let mut x = 0u32;
        for &c in d.iter().take(self.n as usize).rev() {
            x = x * self.p + c % self.p;
        }
        x
    }

    fn equal_add(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.equal_digits(x), self.equal_digits(y));
        let s: Vec<u32> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.equal_from_digits(&s)
    }

    fn equal_mul(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.equal_digits(x), self.equal_digits(y));
        let n = self.n as usize;
        let mut c = vec![0u64; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        let c: Vec<u32> = c.into_iter().map(|v| (v % self.p as u64) as u32).collect();
        self.equal_from_digits(&c)
    }

    pub(crate) fn base_add(&self, x: Elem, y: Elem) -> Elem {
        match self.model {
            Model::Mixed => {
                let s = x + y;
                if s >= self.bsize {
                    s - self.bsize
                } else {
                    s
                }
            }
            Model::Equal => match &self.base_add {
                Some(t) => t[(x * self.bsize + y) as usize],
                None => self.equal_add(x, y),
            },
        }
    }

    pub(crate) fn base_mul(&self, x: Elem, y: Elem) -> Elem {
        match self.model {
            Model::Mixed => ((x as u64 * y as u64) % self.bsize as u64) as u32,
            Model::Equal => match &self.base_mul {
                Some(t) => t[(x * self.bsize + y) as usize],
                None => self.equal_mul(x, y),
            },
        }
    }

    pub(crate) fn base_neg(&self, x: Elem) -> Elem {
        match self.model {
            Model::Mixed => (self.bsize - x) % self.bsize,
            Model::Equal => {
                let d: Vec<u32> = self.equal_digits(x).iter().map(|&a| (self.p - a) % self.p).collect();
                self.equal_from_digits(&d)
            }
        }
    }

    pub(crate) fn base_val(&self, x: Elem) -> u32 {
        if x == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut x = x;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Canonical representative modulo `varpi^d` (both models reduce the
    /// index modulo `p^d`).
    pub(crate) fn base_reduce(&self, x: Elem, d: i64) -> Elem {
        if d <= 0 {
            0
        } else if d as u32 >= self.n {
            x
        } else {
            x % self.p.pow(d as u32)
        }
    }

    /// Exact division by the base uniformizer, canonical modulo `varpi^{N-1}`.
    pub(crate) fn base_div_varpi(&self, x: Elem) -> Elem {
        debug_assert!(x % self.p == 0);
        let shifted = x / self.p;
        let y = if self.model == Model::Equal && self.unit_inv != 1 {
            self.base_mul(shifted, self.unit_inv)
        } else {
            shifted
        };
        self.base_reduce(y, self.n as i64 - 1)
    }

    fn base_inv_slow(&self, x: Elem) -> Option<Elem> {
        if x % self.p == 0 {
            return None;
        }
        (1..self.bsize).find(|&y| self.base_mul(x, y) == 1)
    }

    // ---- coordinates ----

    pub fn coords(&self, mut x: Elem) -> [Elem; MAX_DEGREE] {
        let mut c = [0; MAX_DEGREE];
        if self.l == 1 {
            c[0] = x;
            return c;
        }
        for slot in c.iter_mut().take(self.l as usize) {
            *slot = x % self.bsize;
            x /= self.bsize;
        }
        c
    }

    pub fn from_base_coords(&self, c: &[Elem]) -> Elem {
        let mut x = 0u32;
        for &v in c.iter().take(self.l as usize).rev() {
            x = x * self.bsize + v;
        }
        x
    }

    // ---- ring operations ----

    fn add_slow(&self, x: Elem, y: Elem) -> Elem {
        if self.l == 1 {
            return self.base_add(x, y);
        }
        let (a, b) = (self.coords(x), self.coords(y));
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.l as usize {
            c[i] = self.base_add(a[i], b[i]);
        }
        self.from_base_coords(&c)
    }

    fn mul_slow(&self, x: Elem, y: Elem) -> Elem {
        if self.l == 1 {
            return self.base_mul(x, y);
        }
        let l = self.l as usize;
        let (a, b) = (self.coords(x), self.coords(y));
        let mut c = [0; 2 * MAX_DEGREE];
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                c[i + j] = self.base_add(c[i + j], self.base_mul(a[i], b[j]));
            }
        }
        for d in (l..2 * l - 1).rev() {
            let cd = c[d];
            if cd == 0 {
                continue;
            }
            c[d] = 0;
            for i in 0..l {
                let t = self.base_mul(cd, self.minpoly[i]);
                c[d - l + i] = self.base_add(c[d - l + i], self.base_neg(t));
            }
        }
        self.from_base_coords(&c[..l])
    }

    fn valuation_slow(&self, x: Elem) -> u32 {
        if x == 0 {
            return self.prec;
        }
        let c = self.coords(x);
        let l = self.l as usize;
        match self.kind {
            None => self.base_val(x),
            Some(ExtKind::Unramified) => c[..l].iter().map(|&v| self.base_val(v)).min().unwrap(),
            Some(ExtKind::Ramified) => (0..l)
                .filter(|&i| c[i] != 0)
                .map(|i| self.l * self.base_val(c[i]) + i as u32)
                .min()
                .unwrap(),
        }
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match &self.add_t {
            Some(t) => t[(x * self.size + y) as usize] as Elem,
            None => self.add_slow(x, y),
        }
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.mul_t {
            Some(t) => t[(x * self.size + y) as usize] as Elem,
            None => self.mul_slow(x, y),
        }
    }

    pub fn neg(&self, x: Elem) -> Elem {
        if self.l == 1 {
            return self.base_neg(x);
        }
        let a = self.coords(x);
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.l as usize {
            c[i] = self.base_neg(a[i]);
        }
        self.from_base_coords(&c)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn valuation(&self, x: Elem) -> u32 {
        self.val[x as usize] as u32
    }

    #[inline]
    pub fn is_unit(&self, x: Elem) -> bool {
        self.val[x as usize] == 0
    }

    pub fn inv_unit(&self, x: Elem) -> Result<Elem> {
        match self.inv[x as usize] {
            u32::MAX => Err(Error::NotAUnit(x)),
            y => Ok(y),
        }
    }

    /// Exact quotient by the uniformizer, canonical modulo `pi^{P-1}`.
    pub fn div_pi(&self, x: Elem) -> Elem {
        debug_assert!(self.valuation(x) >= 1);
        match self.kind {
            None => self.base_div_varpi(x),
            Some(ExtKind::Unramified) => {
                let a = self.coords(x);
                let mut c = [0; MAX_DEGREE];
                for i in 0..self.l as usize {
                    c[i] = self.base_div_varpi(a[i]);
                }
                self.from_base_coords(&c)
            }
            Some(ExtKind::Ramified) => {
                let a = self.coords(x);
                let l = self.l as usize;
                let mut c = [0; MAX_DEGREE];
                c[..l - 1].copy_from_slice(&a[1..l]);
                c[l - 1] = self.base_div_varpi(a[0]);
                self.reduce(self.from_base_coords(&c), self.prec as i64 - 1)
            }
        }
    }

    /// `x / pi^k` for `k <= v(x)`, canonical modulo `pi^{P-k}`.
    pub fn div_pi_pow(&self, mut x: Elem, k: u32) -> Elem {
        for _ in 0..k {
            x = self.div_pi(x);
        }
        x
    }

    /// Canonical representative of `x` modulo `pi^d`.
    pub fn reduce(&self, x: Elem, d: i64) -> Elem {
        if d >= self.prec as i64 {
            return x;
        }
        if d <= 0 {
            return 0;
        }
        match self.kind {
            None => self.base_reduce(x, d),
            Some(kind) => {
                let a = self.coords(x);
                let mut c = [0; MAX_DEGREE];
                for i in 0..self.l as usize {
                    let di = match kind {
                        ExtKind::Unramified => d,
                        ExtKind::Ramified => ceil_div(d - i as i64, self.l as i64),
                    };
                    c[i] = self.base_reduce(a[i], di);
                }
                self.from_base_coords(&c)
            }
        }
    }

    // ---- distinguished elements ----

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn from_int(&self, k: i64) -> Elem {
        match self.model {
            Model::Mixed => k.rem_euclid(self.bsize as i64) as u32,
            Model::Equal => k.rem_euclid(self.p as i64) as u32,
        }
    }

    /// Base uniformizer `varpi` as an element of this ring.
    pub fn varpi(&self) -> Elem {
        self.varpi
    }

    /// Uniformizer of this ring: `T` for ramified extensions, else `varpi`.
    pub fn pi(&self) -> Elem {
        match self.kind {
            Some(ExtKind::Ramified) => {
                if self.prec > 1 {
                    self.bsize
                } else {
                    0
                }
            }
            _ => self.varpi,
        }
    }

    /// The generator `T` of an extension.
    pub fn gen_t(&self) -> Elem {
        debug_assert!(self.l > 1);
        self.bsize
    }

    pub fn pi_pow(&self, k: u32) -> Elem {
        if k >= self.prec {
            0
        } else {
            self.pow(self.pi(), k as u64)
        }
    }

    /// Embeds a base-ring element (given by its base index).
    pub fn from_base(&self, b: Elem) -> Elem {
        b
    }

    pub fn is_in_base(&self, x: Elem) -> bool {
        x < self.bsize
    }

    // ---- residues ----

    pub fn residue_size(&self) -> u32 {
        match self.kind {
            Some(ExtKind::Unramified) => self.p.pow(self.l),
            _ => self.p,
        }
    }

    /// Index of the residue class of `x` in `0..residue_size()`.
    pub fn residue_code(&self, x: Elem) -> u32 {
        match self.kind {
            Some(ExtKind::Unramified) => {
                let a = self.coords(x);
                let mut code = 0;
                for i in (0..self.l as usize).rev() {
                    code = code * self.p + a[i] % self.p;
                }
                code
            }
            _ => self.coords(x)[0] % self.p,
        }
    }

    /// Canonical representative of a residue class.
    pub fn residue_rep(&self, mut code: u32) -> Elem {
        match self.kind {
            Some(ExtKind::Unramified) => {
                let mut c = [0; MAX_DEGREE];
                for slot in c.iter_mut().take(self.l as usize) {
                    *slot = code % self.p;
                    code /= self.p;
                }
                self.from_base_coords(&c)
            }
            _ => code,
        }
    }

    /// `pi`-adic digits of `x` (residue codes), least significant first,
    /// `precision()` of them.
    pub fn pi_digits(&self, mut x: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.prec as usize);
        for k in 0..self.prec {
            let c = self.residue_code(x);
            out.push(c);
            if k + 1 < self.prec {
                x = self.div_pi(self.sub(x, self.residue_rep(c)));
            }
        }
        out
    }

    /// Canonical representatives of `o/pi^d`, in increasing index order.
    pub fn reps_mod(&self, d: u32) -> Vec<Elem> {
        (0..self.size).filter(|&x| self.reduce(x, d as i64) == x).collect()
    }

    // ---- metadata ----

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }
    pub fn model(&self) -> Model {
        self.model
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    /// Base precision `N`.
    pub fn base_precision(&self) -> u32 {
        self.n
    }
    /// `pi`-adic precision `e N`.
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn degree(&self) -> u32 {
        self.l
    }
    pub fn ramification(&self) -> u32 {
        self.e
    }
    pub fn kind(&self) -> Option<ExtKind> {
        self.kind
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn base_size(&self) -> u32 {
        self.bsize
    }
    pub fn minimal_poly(&self) -> &[Elem] {
        &self.minpoly
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    // ---- serialization ----

    /// Flat coordinate list: for each `T`-degree (little-endian) the base
    /// coefficient as an integer (MIXED) or as its `N` digits in `t` (EQUAL).
    pub fn to_coords(&self, x: Elem) -> Vec<u32> {
        let c = self.coords(x);
        let mut out = Vec::new();
        for &b in c.iter().take(self.l as usize) {
            match self.model {
                Model::Mixed => out.push(b),
                Model::Equal => out.extend(self.equal_digits(b)),
            }
        }
        out
    }

    pub fn from_coords(&self, flat: &[u32]) -> Result<Elem> {
        let per = match self.model {
            Model::Mixed => 1,
            Model::Equal => self.n as usize,
        };
        if flat.len() != per * self.l as usize {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                per * self.l as usize,
                flat.len()
            )));
        }
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.l as usize {
            let chunk = &flat[i * per..(i + 1) * per];
            c[i] = match self.model {
                Model::Mixed => {
                    if chunk[0] >= self.bsize {
                        return Err(Error::Parse(format!("residue {} out of range", chunk[0])));
                    }
                    chunk[0]
                }
                Model::Equal => {
                    if chunk.iter().any(|&d| d >= self.p) {
                        return Err(Error::Parse("digit out of range".into()));
                    }
                    self.equal_from_digits(chunk)
                }
            };
        }
        Ok(self.from_base_coords(&c))
    }

    /// Moves `x` into `target`, another precision of the same field:
    /// projection when lowering precision, canonical lift when raising it.
    pub fn transfer(&self, x: Elem, target: &Ring) -> Elem {
        debug_assert!(self.spec.same_field(&target.spec));
        if target.n >= self.n {
            if self.l == 1 {
                return x;
            }
            let c = self.coords(x);
            return target.from_base_coords(&c[..self.l as usize]);
        }
        let c = self.coords(x);
        let mut d = [0; MAX_DEGREE];
        for i in 0..self.l as usize {
            d[i] = c[i] % target.bsize;
        }
        target.from_base_coords(&d[..self.l as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ram(p: u32, n: u32, l: u32) -> Ring {
        let mut s = RingSpec::equal(p, n);
        s.ext = Some(ExtSpec { kind: ExtKind::Ramified, l, minimal_poly: None });
        Ring::new(&s).unwrap()
    }

    #[test]
    fn five_squared_in_z8() {
        let r = Ring::new(&RingSpec::mixed(2, 3)).unwrap();
        assert_eq!(r.mul(5, 5), 1);
        assert_eq!(r.inv_unit(5).unwrap(), 5);
        assert_eq!(r.inv_unit(2), Err(Error::NotAUnit(2)));
    }

    #[test]
    fn one_plus_t_squared_in_f2_t2() {
        let r = Ring::new(&RingSpec::equal(2, 2)).unwrap();
        let x = r.from_coords(&[1, 1]).unwrap();
        assert_eq!(r.mul(x, x), 1);
    }

    #[test]
    fn t_squared_is_varpi_in_ramified_extension() {
        let r = ram(3, 2, 2);
        let t = r.gen_t();
        assert_eq!(r.mul(t, t), r.varpi());
        assert_eq!(r.to_coords(r.mul(t, t)), vec![0, 1, 0, 0]);
        assert_eq!(r.precision(), 4);
        // T is nilpotent of index exactly l N
        assert_ne!(r.pow(t, 3), 0);
        assert_eq!(r.pow(t, 4), 0);
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        let specs = vec![RingSpec::mixed(3, 2), RingSpec::equal(2, 3), {
            let mut s = RingSpec::equal(2, 1);
            s.ext = Some(ExtSpec { kind: ExtKind::Unramified, l: 3, minimal_poly: None });
            s
        }];
        for s in specs {
            let r = Ring::new(&s).unwrap();
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(r.mul(a, b), r.mul(b, a));
                    assert_eq!(r.add(r.sub(a, b), b), a);
                    for c in r.elements().step_by(3) {
                        assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                        assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn div_pi_inverts_multiplication() {
        for r in [ram(3, 2, 2), Ring::new(&RingSpec::mixed(2, 4)).unwrap(), {
            Ring::new(&RingSpec::equal(3, 3).with_uniformizer(vec![0, 2, 1])).unwrap()
        }] {
            let pi = r.pi();
            for x in r.elements() {
                let y = r.mul(pi, x);
                let q = r.div_pi(y);
                assert_eq!(r.mul(pi, q), y);
                assert_eq!(r.reduce(q, r.precision() as i64 - 1), r.reduce(x, r.precision() as i64 - 1));
            }
        }
    }

    #[test]
    fn valuation_matches_divisibility() {
        let r = ram(3, 2, 2);
        for x in r.elements() {
            let v = r.valuation(x);
            for d in 0..=r.precision() {
                assert_eq!(r.reduce(x, d as i64) == 0, v >= d, "x={x} d={d}");
            }
        }
    }

    #[test]
    fn coords_roundtrip_and_transfer() {
        let r = ram(3, 2, 2);
        let low = ram(3, 1, 2);
        for x in r.elements() {
            assert_eq!(r.from_coords(&r.to_coords(x)).unwrap(), x);
            let y = r.transfer(x, &low);
            assert_eq!(low.transfer(y, &r), r.reduce(x, 2));
        }
    }
}
