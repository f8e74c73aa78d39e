//! Dense matrices over a prime field F_p.

use serde::{Deserialize, Serialize};

/// Row-major dense matrix with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse mod {p}");
    let mut r = 1u64;
    let mut b = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

pub fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Mat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows(p: u32, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count does not match shape"
        );
        Mat {
            p,
            rows,
            cols,
            data: entries.iter().map(|&v| reduce(v, p)).collect(),
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = (self.data[i] + v % self.p) % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let mut out = Mat::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in other.row(k).iter().enumerate() {
                    if *slot != 0 {
                        acc[j] = (acc[j] + a * *slot as u64) % p;
                    }
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] = acc[j] as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (k, &x) in v.iter().enumerate() {
                    if x != 0 {
                        s = (s + self.get(i, k) as u64 * x as u64) % p;
                    }
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        Mat {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        let p = self.p;
        Mat {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Kronecker product; row index `i * other.rows + k`, column `j * other.cols + l`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j) as u64;
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = (a * other.get(k, l) as u64 % self.p as u64) as u32;
                        out.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.data[i * cols.len() + jj] = self.get(i, j);
            }
        }
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn hstack(p: u32, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.put_block(0, c, b);
            c += b.cols;
        }
        out
    }

    /// Reduced row echelon form and the pivot columns, in increasing order.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), self.p) as u64;
            for j in c..m.cols {
                let v = m.get(r, j) as u64 * inv % p;
                m.data[r * m.cols + j] = v as u32;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c) as u64;
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let sub = factor * m.get(r, j) as u64 % p;
                    let v = (m.get(i, j) as u64 + p - sub) % p;
                    m.data[i * m.cols + j] = v as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the null space, as the columns of the returned `cols × k` matrix.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (jj, &f) in free.iter().enumerate() {
            k.set(f, jj, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if v != 0 {
                    k.set(pc, jj, self.p - v);
                }
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(self.p, 0, 0));
        }
        let aug = Mat::hstack(self.p, n, &[self, &Mat::identity(self.p, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Row-reduced spanning set that supports reduction of vectors modulo its span.
#[derive(Clone, Debug)]
pub struct Span {
    pub p: u32,
    pub dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(p: u32, dim: usize) -> Self {
        Span {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows, leaving zeros in every pivot column.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc] as u64;
            if f == 0 {
                continue;
            }
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    v[j] = ((v[j] as u64 + p - f * x as u64 % p) % p) as u32;
                }
            }
        }
    }

    /// Adds a vector, keeping the rows fully reduced. Returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p as u64;
        let inv = inv_mod(v[pc], self.p) as u64;
        v.iter_mut().for_each(|x| *x = (*x as u64 * inv % p) as u32);
        for row in self.rows.iter_mut() {
            let f = row[pc] as u64;
            if f != 0 {
                for (j, &x) in v.iter().enumerate() {
                    if x != 0 {
                        row[j] = ((row[j] as u64 + p - f * x as u64 % p) % p) as u32;
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates that are not pivots; these index a basis of the quotient.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(3, 2, 2, &[1, 2, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3, 2));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = Mat::from_rows(2, 2, 3, &[1, 1, 0, 0, 1, 1]);
        let k = m.kernel();
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn span_complement() {
        let mut s = Span::new(2, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(!s.insert(vec![1, 1, 0]));
        assert_eq!(s.complement(), vec![1, 2]);
        let mut v = vec![1, 0, 1];
        s.reduce(&mut v);
        assert_eq!(v, vec![0, 1, 1]);
    }
}
