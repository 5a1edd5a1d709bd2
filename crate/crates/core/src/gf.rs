//! Small finite fields `F_{l^k}` with table-driven multiplication.
//!
//! Elements are `u32` indices whose base-`l` digits (least significant first)
//! are the coordinates in the power basis `1, x, ..., x^{k-1}` of
//! `F_l[x]/(g)`, where `g` is the smallest monic irreducible of degree `k`.

use crate::error::{Error, Result};
use crate::poly;

pub type Gf = u32;

#[derive(Debug, Clone)]
pub struct CoeffField {
    l: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial, little-endian, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for CoeffField {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for CoeffField {}

/// Upper bound on field size; tables are `O(q)`.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffField {
    pub fn prime(l: u32) -> Result<Self> {
        Self::new(l, 1)
    }

    pub fn new(l: u32, k: u32) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::ConfigInvalid(format!("{l} is not prime")));
        }
        if k == 0 {
            return Err(Error::ConfigInvalid("field degree must be >= 1".into()));
        }
        let size = (l as u64).checked_pow(k).filter(|s| *s <= MAX_FIELD_SIZE);
        let q = size.ok_or_else(|| Error::ConfigInvalid(format!("F_{l}^{k} too large")))? as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let base = Self::prime(l)?;
            poly::smallest_irreducible(&base, k as usize)
        };
        let mut field = CoeffField { l, k, q, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = q - 1;
        // smallest element of full multiplicative order
        let mut gen = None;
        'search: for cand in 1..q as u32 {
            let mut x = 1u32;
            for i in 1..=order {
                x = self.slow_mul(x, cand);
                if x == 1 {
                    if i == order {
                        gen = Some(cand);
                        break 'search;
                    }
                    break;
                }
            }
        }
        let g = gen.expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, g);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let l = self.l;
        if self.k == 1 {
            return ((a as u64 * b as u64) % l as u64) as u32;
        }
        let k = self.k as usize;
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % l;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let sub = (c * self.modulus[i]) % l;
                prod[d - k + i] = (prod[d - k + i] + l - sub) % l;
            }
        }
        self.from_coords(&prod[..k])
    }

    pub fn characteristic(&self) -> u32 {
        self.l
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Gf {
        0
    }
    pub fn one(&self) -> Gf {
        1
    }

    pub fn coords(&self, mut x: Gf) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(x % self.l);
            x /= self.l;
        }
        out
    }

    pub fn from_coords(&self, c: &[u32]) -> Gf {
        let mut x = 0u32;
        for &d in c.iter().take(self.k as usize).rev() {
            x = x * self.l + d % self.l;
        }
        x
    }

    pub fn from_int(&self, n: i64) -> Gf {
        n.rem_euclid(self.l as i64) as u32
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.l { s - self.l } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let d = (a % self.l + b % self.l) % self.l;
            out += d * place;
            place *= self.l;
            a /= self.l;
            b /= self.l;
        }
        out
    }

    pub fn neg(&self, a: Gf) -> Gf {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.l - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let d = (self.l - a % self.l) % self.l;
            out += d * place;
            place *= self.l;
            a /= self.l;
        }
        out
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Gf) -> Option<Gf> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// `x -> x^l`.
    pub fn frobenius(&self, a: Gf) -> Gf {
        self.pow(a, self.l as u64)
    }

    /// `x -> x^{1/l} = x^{l^{k-1}}`.
    pub fn inverse_frobenius(&self, a: Gf) -> Gf {
        self.pow(a, (self.l as u64).pow(self.k - 1))
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        0..self.q
    }
}
