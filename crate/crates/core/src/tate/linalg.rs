use crate::error::{Error, Result};
use crate::gf::{CoeffField, Gf};

/// Dense matrix over `F_{l^k}`, row-major. Operators act on column vectors;
/// subspaces are stored as matrices whose rows span them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Gf>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Gf>], cols: usize) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Gf] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, f: &CoeffField, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, f: &CoeffField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &CoeffField, other: &Mat) -> Mat {
        self.add(f, &other.scale(f, f.neg(1)))
    }

    pub fn scale(&self, f: &CoeffField, c: Gf) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn map(&self, g: impl Fn(Gf) -> Gf) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| g(a)).collect() }
    }

    pub fn pow(&self, f: &CoeffField, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, f: &CoeffField, v: &[Gf]) -> Vec<Gf> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, f: &CoeffField) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self, f: &CoeffField) -> usize {
        self.rref(f).1.len()
    }

    /// Basis (RREF rows) of `{v : A v = 0}`.
    pub fn kernel(&self, f: &CoeffField) -> Mat {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, fc));
            }
            basis.push(v);
        }
        Mat::from_rows(&basis, self.cols).rref(f).0
    }

    /// Basis (RREF rows) of the column space `{A v}`.
    pub fn image(&self, f: &CoeffField) -> Mat {
        self.transpose().rref(f).0
    }

    pub fn inverse(&self, f: &CoeffField) -> Result<Mat> {
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::NotCompatible("matrix is singular".into()));
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut out = Mat::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }
}

/// Row-reduces `v` against an RREF basis; returns the remainder.
pub fn reduce_against(f: &CoeffField, basis: &Mat, pivots: &[usize], v: &[Gf]) -> Vec<Gf> {
    let mut w = v.to_vec();
    for (i, &c) in pivots.iter().enumerate() {
        let a = w[c];
        if a != 0 {
            for (j, x) in w.iter_mut().enumerate() {
                *x = f.sub(*x, f.mul(a, basis.get(i, j)));
            }
        }
    }
    w
}

/// Canonical complement representatives of `sub` inside `total`: RREF rows
/// that vanish on the pivot columns of `sub`.
pub fn quotient_basis(f: &CoeffField, total: &Mat, sub: &Mat) -> Mat {
    let (sb, sp) = sub.rref(f);
    let reduced: Vec<Vec<Gf>> = (0..total.rows).map(|i| reduce_against(f, &sb, &sp, total.row(i))).collect();
    Mat::from_rows(&reduced, total.cols).rref(f).0
}

/// Coordinates of `v` in the span of the RREF basis (rows), if it lies there.
pub fn coordinates(f: &CoeffField, basis: &Mat, pivots: &[usize], v: &[Gf]) -> Option<Vec<Gf>> {
    let coords: Vec<Gf> = pivots.iter().map(|&c| v[c]).collect();
    let rest = reduce_against(f, basis, pivots, v);
    rest.iter().all(|&x| x == 0).then_some(coords)
}
