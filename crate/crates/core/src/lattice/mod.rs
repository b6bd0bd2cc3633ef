//! Integer lattices and the annihilator encoding of closed subgroups of a torus.

mod matrix;
mod subgroup;

pub use matrix::IntMatrix;
pub use subgroup::{close_universe, Character, ClosedSubgroup, ClosureReport, SubgroupJson};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A sublattice of ℤ^r, stored by its canonical Hermite basis.
///
/// Two lattices are equal exactly when their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn new(ambient_rank: usize, generators: &IntMatrix) -> Self {
        assert_eq!(
            generators.cols(),
            ambient_rank,
            "generator length differs from ambient rank"
        );
        Lattice {
            ambient_rank,
            basis: generators.hnf(),
        }
    }

    pub fn from_i64(ambient_rank: usize, rows: &[Vec<i64>]) -> Self {
        Self::new(ambient_rank, &IntMatrix::from_i64(ambient_rank, rows))
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::zeros(0, ambient_rank),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in self.basis.row_vecs() {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("zero row in canonical basis");
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis
            .row_vecs()
            .iter()
            .all(|r| other.contains_vector(r))
    }

    /// `self ⊗ ℚ ∩ ℤ^r`.
    pub fn saturate(&self) -> Lattice {
        let perp = self.basis.kernel();
        if perp.rows() == 0 {
            return Lattice::full(self.ambient_rank);
        }
        Lattice {
            ambient_rank: self.ambient_rank,
            basis: perp.kernel(),
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        if self.rank() == 0 || other.rank() == 0 {
            return Lattice::zero(self.ambient_rank);
        }
        let stacked = self.basis.vstack(&other.basis);
        // (a, b) with a·B₁ + b·B₂ = 0 gives a·B₁ in both lattices
        let rel = stacked.transpose().kernel();
        let k1 = self.rank();
        let rows: Vec<Vec<BigInt>> = rel
            .row_vecs()
            .iter()
            .map(|r| {
                let a = IntMatrix::from_rows(k1, vec![r[..k1].to_vec()]);
                a.mul(&self.basis).row(0).to_vec()
            })
            .collect();
        Lattice::new(
            self.ambient_rank,
            &IntMatrix::from_rows(self.ambient_rank, rows),
        )
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::new(self.ambient_rank, &self.basis.vstack(&other.basis))
    }

    /// For `sub ⊆ self`: whether `self / sub` is torsion-free.
    pub fn quotient_torsion_free(&self, sub: &Lattice) -> bool {
        let coords: Vec<Vec<BigInt>> = match sub
            .basis
            .row_vecs()
            .iter()
            .map(|r| self.coordinates(r))
            .collect::<Option<Vec<_>>>()
        {
            Some(c) => c,
            None => return false,
        };
        if coords.is_empty() {
            return true;
        }
        let inner = Lattice::new(self.rank(), &IntMatrix::from_rows(self.rank(), coords));
        inner.is_saturated()
    }

    /// Index `[saturate(self) : self]`.
    pub fn saturation_index(&self) -> BigInt {
        let sat = self.saturate();
        let coords: Vec<Vec<BigInt>> = self
            .basis
            .row_vecs()
            .iter()
            .map(|r| sat.coordinates(r).expect("lattice lies in its saturation"))
            .collect();
        IntMatrix::from_rows(sat.rank(), coords)
            .elementary_divisors()
            .into_iter()
            .fold(BigInt::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(r: usize, rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_i64(r, rows)
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(lat(1, &[vec![2]]).saturate(), Lattice::full(1));
        assert_eq!(lat(2, &[vec![2, 2]]).saturate(), lat(2, &[vec![1, 1]]));
        assert_eq!(
            lat(2, &[vec![2, 0], vec![0, 3]]).saturate(),
            Lattice::full(2)
        );
        assert_eq!(Lattice::zero(2).saturate(), Lattice::zero(2));
    }

    #[test]
    fn intersection_diagonal_with_c2() {
        let a = lat(2, &[vec![2, 0], vec![0, 1]]);
        let b = lat(2, &[vec![1, -1]]);
        assert_eq!(a.intersect(&b), lat(2, &[vec![2, -2]]));
    }

    #[test]
    fn torsion_in_quotient() {
        let a = lat(1, &[vec![1]]);
        let b = lat(1, &[vec![2]]);
        assert!(!a.quotient_torsion_free(&b));
        assert!(b.quotient_torsion_free(&Lattice::zero(1)));
    }

    #[test]
    fn index_of_sublattice() {
        assert_eq!(
            lat(2, &[vec![2, 0], vec![0, 3]]).saturation_index(),
            BigInt::from(6)
        );
    }
}
