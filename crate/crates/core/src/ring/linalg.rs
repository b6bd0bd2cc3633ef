//! Exact linear algebra over ℚ.

use num_traits::{One, Zero};

use super::poly::Q;

pub type QVec = Vec<Q>;

pub fn zero_vec(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> QVec {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// Adds `c · src` into `dst`.
pub fn axpy(dst: &mut [Q], c: &Q, src: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![zero_vec(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<QVec>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rational matrix"
        );
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[QVec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in 0..rows {
                m.data[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn col(&self, j: usize) -> QVec {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                axpy(&mut out.data[i], a, &other.data[k]);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        self.data
            .iter()
            .map(|r| {
                let mut s = Q::zero();
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| vec_add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| vec_scale(r, c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vec(r))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        QMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[QMatrix]) -> QMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut i0, mut j0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[i0 + i][j0 + j] = b.data[i][j].clone();
                }
            }
            i0 += b.rows;
            j0 += b.cols;
        }
        m
    }

    /// Sub-block of rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> QMatrix {
        let data = (r0..r0 + nr)
            .map(|i| self.data[i][c0..c0 + nc].to_vec())
            .collect();
        QMatrix {
            rows: nr,
            cols: nc,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn kernel(&self) -> Vec<QVec> {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.null_space()
    }

    /// Some `x` with `self · x = b`.
    pub fn solve(&self, b: &[Q]) -> Option<QVec> {
        assert_eq!(b.len(), self.rows);
        // eliminate on the augmented matrix
        let mut e = Echelon::new(self.cols + 1);
        for (r, bi) in self.data.iter().zip(b) {
            let mut row = r.clone();
            row.push(bi.clone());
            e.insert(row);
        }
        if e.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let mut e = Echelon::new(2 * n);
        for r in &aug.data {
            e.insert(r.clone());
        }
        if e.rank() != n || e.pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            inv.data[p] = row[n..].to_vec();
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of ℚ^n.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    rows: Vec<QVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Echelon {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    /// Reduces `v` modulo the subspace; the result vanishes on pivot columns.
    pub fn reduce(&self, v: &[Q]) -> QVec {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -v[p].clone();
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: QVec) -> bool {
        assert_eq!(v.len(), self.n);
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / v[p].clone();
        v = vec_scale(&v, &inv);
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &v);
            }
        }
        let pos = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.pivots.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    /// Non-pivot coordinates, spanning a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Basis of the solution space of `row · x = 0` for every stored row.
    pub fn null_space(&self) -> Vec<QVec> {
        let free = self.free_columns();
        free.iter()
            .map(|&f| {
                let mut x = zero_vec(self.n);
                x[f] = Q::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = -row[f].clone();
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;

    fn m(rows: &[&[i64]]) -> QMatrix {
        let c = rows[0].len();
        QMatrix::from_rows(
            c,
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let x = a.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(m(&[&[1, 1], &[2, 2]]).inverse().is_none());
        assert!(m(&[&[1, 1], &[2, 2]]).solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn kernel_dimension() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
    }
}
