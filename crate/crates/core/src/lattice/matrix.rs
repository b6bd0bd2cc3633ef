use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged integer matrix"
        );
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
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

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += p;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Canonical row Hermite normal form with zero rows removed.
    ///
    /// Pivots are positive and every entry above a pivot lies in `[0, pivot)`.
    pub fn hnf(&self) -> IntMatrix {
        let (h, _) = echelon(&self.data, self.cols, self.cols);
        IntMatrix::from_rows(self.cols, h)
    }

    pub fn rank(&self) -> usize {
        self.hnf().rows
    }

    /// A basis, in Hermite normal form, of `{x ∈ ℤ^cols : self · x = 0}`.
    /// Rows of the result are the kernel vectors.
    pub fn kernel(&self) -> IntMatrix {
        let n = self.cols;
        let t = self.transpose();
        let aug: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r = t.data[i].clone();
                r.extend((0..n).map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                }));
                r
            })
            .collect();
        let (h, rank) = echelon(&aug, self.rows, self.rows + n);
        let mut ker = Vec::new();
        for row in h.iter().skip(rank) {
            ker.push(row[self.rows..].to_vec());
        }
        // rows past the rank were dropped by `echelon` only if entirely zero,
        // which cannot happen for the identity block
        IntMatrix::from_rows(n, ker).hnf()
    }

    /// Diagonal of the Smith normal form (nonzero invariant factors only,
    /// each dividing the next).
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // locate a nonzero entry of minimal absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..n {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().take(m).skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let mut bad = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = bad {
                for j in t..n {
                    let v = a[i][j].clone();
                    a[t][j] += v;
                }
                continue;
            }
            diag.push(a[t][t].abs());
            t += 1;
        }
        diag
    }
}

/// Row-reduces `rows` to echelon form using pivots only among the first
/// `pivot_cols` columns. Returns the reduced rows (zero rows dropped when
/// `pivot_cols == width`) and the number of pivots.
fn echelon(rows: &[Vec<BigInt>], pivot_cols: usize, width: usize) -> (Vec<Vec<BigInt>>, usize) {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut p = 0;
    let mut pivots = Vec::new();
    for col in 0..pivot_cols {
        if p == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in p..m {
                if !a[r][col].is_zero() && best.map_or(true, |b| a[r][col].abs() < a[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(p, b);
            let mut done = true;
            for r in p + 1..m {
                if !a[r][col].is_zero() {
                    let q = a[r][col].div_floor(&a[p][col]);
                    for j in col..width {
                        let v = &q * &a[p][j];
                        a[r][j] -= v;
                    }
                    if !a[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if p < m && !a[p][col].is_zero() {
            if a[p][col].is_negative() {
                for j in 0..width {
                    a[p][j] = -a[p][j].clone();
                }
            }
            for r in 0..p {
                let q = a[r][col].div_floor(&a[p][col]);
                if !q.is_zero() {
                    for j in col..width {
                        let v = &q * &a[p][j];
                        a[r][j] -= v;
                    }
                }
            }
            pivots.push(col);
            p += 1;
        }
    }
    if pivot_cols == width {
        a.truncate(p);
    }
    (a, p)
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_identity_is_identity() {
        let id = IntMatrix::identity(3);
        assert_eq!(id.hnf(), id);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let m = IntMatrix::from_i64(2, &[vec![2, 0], vec![1, 1]]);
        let h = m.hnf();
        assert_eq!(h, IntMatrix::from_i64(2, &[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::from_i64(3, &[vec![1, 2, 3]]);
        let k = m.kernel();
        assert_eq!(k.rows(), 2);
        for r in k.row_vecs() {
            let dot: BigInt = r.iter().zip(m.row(0)).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn smith_diagonal() {
        let m = IntMatrix::from_i64(2, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(
            m.elementary_divisors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }
}
