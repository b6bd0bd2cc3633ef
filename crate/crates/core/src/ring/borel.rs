//! Rational Borel cohomology `H^*(B(G/K)) = Sym(Λ(K) ⊗ ℚ)` of torus quotients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::comp::{CompRing, CompRingMap};
use super::poly::{Poly, Q};
use crate::error::{precondition, Error, Result};
use crate::lattice::{Character, ClosedSubgroup, Lattice};

/// The polynomial ring on a basis of the annihilator lattice `Λ(K)`; the
/// variable `x_i` is the first Chern class of the `i`-th basis character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelRing {
    subgroup: ClosedSubgroup,
    ring: CompRing,
}

impl BorelRing {
    pub fn new(k: &ClosedSubgroup) -> Self {
        BorelRing {
            subgroup: k.clone(),
            ring: CompRing::polynomial(k.codim()),
        }
    }

    pub fn subgroup(&self) -> &ClosedSubgroup {
        &self.subgroup
    }

    pub fn lattice(&self) -> &Lattice {
        self.subgroup.annihilator()
    }

    pub fn ring(&self) -> &CompRing {
        &self.ring
    }

    /// `c₁(α)` for a character `α ∈ Λ(K)`, i.e. trivial on `K`.
    pub fn chern_class(&self, alpha: &Character) -> Result<Poly> {
        let coords = self.lattice().coordinates(&alpha.0).ok_or_else(|| {
            Error::Precondition(format!(
                "character is not trivial on {}",
                self.subgroup.name()
            ))
        })?;
        Ok(Poly::linear(
            &coords.into_iter().map(Q::from_integer).collect::<Vec<_>>(),
        ))
    }
}

pub fn borel_ring(k: &ClosedSubgroup) -> BorelRing {
    BorelRing::new(k)
}

/// Inflation `H^*(B(G/K)) → H^*(B(G/L))` for `L ⊆ K`, induced by
/// `Λ(K) ⊆ Λ(L)`.
pub fn inflation(k: &ClosedSubgroup, l: &ClosedSubgroup) -> Result<CompRingMap> {
    if !k.contains(l)? {
        return precondition(format!("{} does not contain {}", k.name(), l.name()));
    }
    let src = CompRing::polynomial(k.codim());
    let tgt = CompRing::polynomial(l.codim());
    let images = k
        .annihilator()
        .basis()
        .row_vecs()
        .iter()
        .map(|row| {
            let c = l.annihilator().coordinates(row).expect("Λ(K) ⊆ Λ(L)");
            Poly::linear(&c.into_iter().map(Q::from_integer).collect::<Vec<_>>())
        })
        .collect();
    CompRingMap::new(&src, &tgt, images)
}

/// Termwise inflation from `G/K̃` to `G/K` for the identity component `K`;
/// an isomorphism over ℚ used to store everything in the connected basis.
pub fn connected_identification(ktilde: &ClosedSubgroup) -> Result<CompRingMap> {
    inflation(ktilde, &ktilde.identity_component())
}

/// The generator of `Λ(H)` for a codimension-one connected `H`, with
/// positive pivot: the chosen faithful character of `G/H`.
pub fn faithful_character(h: &ClosedSubgroup) -> Result<Character> {
    if h.codim() != 1 || !h.is_connected() {
        return precondition(format!(
            "{} is not a connected subgroup of codimension 1",
            h.name()
        ));
    }
    Ok(Character(h.annihilator().basis().row(0).to_vec()))
}

/// `c(α)(H̃)` in the connected basis of `H^*(B(G/H))`: for `α = g^n` with `g`
/// the faithful character of `G/H`, this is `n·c₁(g)` when `|H̃/H|` divides
/// `n` and `1` otherwise.
pub fn euler_class(alpha: &Character, htilde: &ClosedSubgroup, h: &ClosedSubgroup) -> Result<Poly> {
    if htilde.identity_component() != *h {
        return precondition(format!(
            "{} is not the identity component of {}",
            h.name(),
            htilde.name()
        ));
    }
    faithful_character(h)?;
    let n = h
        .annihilator()
        .coordinates(&alpha.0)
        .ok_or_else(|| Error::Precondition(format!("character is not trivial on {}", h.name())))?
        .remove(0);
    if n.is_zero() {
        return precondition("the trivial character has no Euler class");
    }
    if alpha.is_trivial_on(htilde) {
        Ok(Poly::linear(&[Q::from_integer(n)]))
    } else {
        Ok(Poly::one(1))
    }
}

/// `g^n` for the faithful character `g` of `G/H`.
pub fn power_of_faithful(h: &ClosedSubgroup, n: i64) -> Result<Character> {
    let g = faithful_character(h)?;
    Ok(Character(g.0.iter().map(|x| x * BigInt::from(n)).collect()))
}

/// `|H̃ / H|` for a subgroup whose identity component has codimension one.
pub fn component_order(htilde: &ClosedSubgroup) -> BigInt {
    let c = htilde.component_count();
    if c.is_zero() {
        BigInt::one()
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;

    #[test]
    fn dichotomy_rank1() {
        let one = ClosedSubgroup::trivial(1);
        let c2 = ClosedSubgroup::cyclic(2);
        let a2 = power_of_faithful(&one, 2).unwrap();
        let a3 = power_of_faithful(&one, 3).unwrap();
        assert_eq!(euler_class(&a2, &c2, &one).unwrap(), Poly::linear(&[q(2)]));
        assert_eq!(euler_class(&a3, &c2, &one).unwrap(), Poly::one(1));
    }

    #[test]
    fn diagonal_inflation() {
        let hd = ClosedSubgroup::from_annihilator("HD", 2, &[vec![1, -1]]);
        let one = ClosedSubgroup::trivial(2);
        let inf = inflation(&hd, &one).unwrap();
        assert_eq!(inf.images()[0], Poly::linear(&[q(1), q(-1)]));
    }

    #[test]
    fn identification_scales_by_component_count() {
        let c2 = ClosedSubgroup::cyclic(2);
        let id = connected_identification(&c2).unwrap();
        assert_eq!(id.images()[0], Poly::linear(&[q(2)]));
    }
}
