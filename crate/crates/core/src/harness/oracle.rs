//! Brute-force checks that do not go through the lattice normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::ClosedSubgroup;

fn rows(h: &ClosedSubgroup) -> Vec<Vec<BigInt>> {
    h.annihilator().basis().row_vecs().to_vec()
}

/// Rational coordinates of `v` in the span of the independent `basis`, by
/// plain elimination on the augmented system.
fn rational_coordinates(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = v.len();
    // columns are basis vectors, last column is v
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from_integer(b[i].clone()))
                .collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= lead.clone();
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = a[r][j].clone() * f.clone();
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != k || a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a[i][k].clone()).collect())
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][c] * det(&minor);
                if c % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Integer coordinates of the characters of `big`'s annihilator in `small`'s,
/// when `small ⊆ big`; `None` otherwise.
fn inclusion_coordinates(small: &ClosedSubgroup, big: &ClosedSubgroup) -> Option<Vec<Vec<BigInt>>> {
    let basis = rows(small);
    rows(big)
        .iter()
        .map(|v| {
            let c = rational_coordinates(&basis, v)?;
            c.iter()
                .all(|x| x.is_integer())
                .then(|| c.iter().map(|x| x.to_integer()).collect())
        })
        .collect()
}

pub fn contains(big: &ClosedSubgroup, small: &ClosedSubgroup) -> bool {
    inclusion_coordinates(small, big).is_some()
}

/// `small ⊆ big` with torsion-free quotient of character lattices: the gcd of
/// the maximal minors of the coordinate matrix (the product of its
/// elementary divisors) is one.
pub fn cotoral(small: &ClosedSubgroup, big: &ClosedSubgroup) -> bool {
    let Some(coords) = inclusion_coordinates(small, big) else {
        return false;
    };
    let k = coords.len();
    if k == 0 {
        return true;
    }
    let m = coords[0].len();
    let mut g = BigInt::zero();
    for cols in subsets(m, k) {
        let minor: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        g = g.gcd(&det(&minor));
    }
    g.abs().is_one()
}

/// Dimension of the degree-`d` part of `k[x_1..x_n]/(x)^length` with
/// generators in degree 2, counted by stars and bars.
pub fn truncated_dim(nvars: usize, length: u32, d: i64) -> usize {
    if d < 0 || d % 2 != 0 {
        return 0;
    }
    let e = (d / 2) as usize;
    if e >= length as usize {
        return 0;
    }
    if nvars == 0 {
        return usize::from(e == 0);
    }
    // C(e + n - 1, n - 1)
    (1..nvars).fold(1usize, |acc, i| acc * (e + i) / i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_subgroups() {
        let t = ClosedSubgroup::torus(1);
        let one = ClosedSubgroup::trivial(1);
        let c2 = ClosedSubgroup::cyclic(2);
        let c4 = ClosedSubgroup::cyclic(4);
        assert!(cotoral(&c2, &t) && cotoral(&one, &t));
        assert!(contains(&c4, &c2) && !cotoral(&c2, &c4));
        assert!(!contains(&c2, &t));
    }

    #[test]
    fn truncated_dims() {
        assert_eq!(
            (0..6).map(|d| truncated_dim(1, 2, d)).collect::<Vec<_>>(),
            vec![1, 0, 1, 0, 0, 0]
        );
        assert_eq!(truncated_dim(2, 3, 4), 3);
        assert_eq!(truncated_dim(0, 2, 0), 1);
    }
}
