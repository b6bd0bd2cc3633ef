//! Splitting diagrams and maximally generated Euler systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::borel::{component_order, euler_class, inflation, power_of_faithful};
use super::comp::CompRing;
use super::product::{ProductRing, RingElem, RingMap};
use crate::error::{construction, precondition, Error, Result};
use crate::poset::{MultiplicitySystem, Poset};

/// A contravariant ring-valued functor on a poset of subgroups:
/// `R(G/K) → R(G/L)` for `L ⊆ K`.
#[derive(Clone, Debug)]
pub struct SplittingDiagram {
    base: Arc<Poset>,
    rings: Vec<ProductRing>,
    inflations: BTreeMap<(usize, usize), RingMap>,
}

impl SplittingDiagram {
    /// `R(G/K) = H^*(B(G/K))` in the basis of the identity component, one
    /// component per node.
    pub fn borel(base: Arc<Poset>) -> Result<Self> {
        let rings: Vec<ProductRing> = (0..base.len())
            .map(|k| {
                let h = base.group(k).identity_component();
                ProductRing::single(CompRing::polynomial(h.codim()), base.label(k))
            })
            .collect();
        let mut inflations = BTreeMap::new();
        for k in 0..base.len() {
            for l in 0..base.len() {
                if base.leq(l, k) {
                    let m = inflation(
                        &base.group(k).identity_component(),
                        &base.group(l).identity_component(),
                    )?;
                    inflations.insert(
                        (k, l),
                        RingMap::new(&rings[k], &rings[l], vec![0], vec![m])?,
                    );
                }
            }
        }
        let d = SplittingDiagram {
            base,
            rings,
            inflations,
        };
        d.check_functoriality()?;
        Ok(d)
    }

    /// `R(G/K) = ∏_{K̃ ∈ F/K} H^*(B(G/K))` on the connected poset, with
    /// inflation along the pushforwards `i_*`.
    pub fn fibered(ms: &MultiplicitySystem) -> Result<Self> {
        let sc = ms.sigma_c().clone();
        let sa = ms.sigma_a();
        let rings: Vec<ProductRing> = (0..sc.len())
            .map(|k| {
                let fib = ms.fiber(k);
                ProductRing::new(
                    vec![CompRing::polynomial(sc.group(k).codim()); fib.len()],
                    fib.iter().map(|&a| sa.label(a).to_string()).collect(),
                )
            })
            .collect();
        let mut inflations = BTreeMap::new();
        for k in 0..sc.len() {
            for l in 0..sc.len() {
                if !sc.leq(l, k) {
                    continue;
                }
                let m = inflation(sc.group(k), sc.group(l))?;
                let n = ms.fiber(l).len();
                let src_index = (0..n).map(|j| ms.push(l, k, j)).collect();
                inflations.insert(
                    (k, l),
                    RingMap::new(&rings[k], &rings[l], src_index, vec![m; n])?,
                );
            }
        }
        let d = SplittingDiagram {
            base: sc,
            rings,
            inflations,
        };
        d.check_functoriality()?;
        Ok(d)
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn ring(&self, k: usize) -> &ProductRing {
        &self.rings[k]
    }

    /// Inflation from `G/K` to `G/L`, for `L ⊆ K`.
    pub fn inflation(&self, k: usize, l: usize) -> Result<&RingMap> {
        self.inflations.get(&(k, l)).ok_or_else(|| {
            Error::Precondition(format!(
                "{} does not lie below {}",
                self.base.label(l),
                self.base.label(k)
            ))
        })
    }

    pub fn check_functoriality(&self) -> Result<()> {
        for (&(h, k), a) in &self.inflations {
            for (&(k2, l), b) in &self.inflations {
                if k2 != k {
                    continue;
                }
                let direct = &self.inflations[&(h, l)];
                if a.then(b)? != *direct {
                    return construction(format!(
                        "inflation not functorial along {} ⊇ {} ⊇ {}",
                        self.base.label(h),
                        self.base.label(k),
                        self.base.label(l)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EulerVariant {
    /// Euler classes of faithful characters, one component per node.
    Borel,
    /// `c(α)(H̃) = c₁(α^H̃)`, the dichotomy-valued classes.
    Natural,
    /// The faithful class of `G/H` in every component.
    Diagonal,
    /// The faithful class in one component and `1` elsewhere.
    Componentwise,
}

/// Chosen generators `e^H ∈ R(G/H)` for the maximal elements; the set
/// `E_{K/L}` is generated by the inflations of `e^H` for `L ⊆ H`, `K ⊄ H`.
#[derive(Clone, Debug)]
pub struct EulerSystem {
    variant: EulerVariant,
    generators: BTreeMap<usize, Vec<RingElem>>,
}

impl EulerSystem {
    pub fn standard_borel(rs: &SplittingDiagram) -> Result<Self> {
        let base = rs.base();
        let maximal = base.maximal();
        if maximal.is_empty() {
            return precondition("no maximal elements");
        }
        let mut generators = BTreeMap::new();
        for m in maximal {
            let ht = base.group(m);
            let h = ht.identity_component();
            if h.codim() != 1 {
                return precondition(format!(
                    "maximal element {} is not of codimension 1",
                    ht.name()
                ));
            }
            let n = component_order(ht).to_i64().expect("small component group");
            let e = euler_class(&power_of_faithful(&h, n)?, ht, &h)?;
            generators.insert(m, vec![vec![rs.ring(m).component(0).from_poly(e)]]);
        }
        Ok(EulerSystem {
            variant: EulerVariant::Borel,
            generators,
        })
    }

    pub fn standard_fibered(
        ms: &MultiplicitySystem,
        rs: &SplittingDiagram,
        variant: EulerVariant,
    ) -> Result<Self> {
        let sc = ms.sigma_c();
        let sa = ms.sigma_a();
        let maximal = sc.maximal();
        if maximal.is_empty() {
            return precondition("no maximal elements");
        }
        let mut generators = BTreeMap::new();
        for m in maximal {
            let h = sc.group(m);
            if h.codim() != 1 {
                return precondition(format!(
                    "maximal element {} is not of codimension 1",
                    h.name()
                ));
            }
            let ring = rs.ring(m).component(0).clone();
            let fib = ms.fiber(m);
            let t = ring.var(0);
            let gens: Vec<RingElem> = match variant {
                EulerVariant::Natural => {
                    let mut orders: Vec<i64> = fib
                        .iter()
                        .map(|&a| {
                            component_order(sa.group(a))
                                .to_i64()
                                .expect("small component group")
                        })
                        .collect();
                    orders.push(1);
                    orders.sort();
                    orders.dedup();
                    orders
                        .into_iter()
                        .map(|n| {
                            let alpha = power_of_faithful(h, n)?;
                            fib.iter()
                                .map(|&a| Ok(ring.from_poly(euler_class(&alpha, sa.group(a), h)?)))
                                .collect::<Result<RingElem>>()
                        })
                        .collect::<Result<_>>()?
                }
                EulerVariant::Diagonal => vec![vec![t.clone(); fib.len()]],
                EulerVariant::Componentwise => (0..fib.len())
                    .map(|i| {
                        (0..fib.len())
                            .map(|j| if i == j { t.clone() } else { ring.one() })
                            .collect()
                    })
                    .collect(),
                EulerVariant::Borel => return precondition("the Borel variant has no fibers"),
            };
            generators.insert(m, gens);
        }
        Ok(EulerSystem {
            variant,
            generators,
        })
    }

    /// A system with explicitly supplied generators.
    pub fn from_generators(
        variant: EulerVariant,
        generators: BTreeMap<usize, Vec<RingElem>>,
    ) -> Self {
        EulerSystem {
            variant,
            generators,
        }
    }

    pub fn variant(&self) -> EulerVariant {
        self.variant
    }

    pub fn generators(&self) -> &BTreeMap<usize, Vec<RingElem>> {
        &self.generators
    }

    pub fn generators_mut(&mut self) -> &mut BTreeMap<usize, Vec<RingElem>> {
        &mut self.generators
    }

    /// Generators of `E_{K/L}` in `R(G/L)`.
    pub fn euler_set(&self, rs: &SplittingDiagram, k: usize, l: usize) -> Result<Vec<RingElem>> {
        let base = rs.base();
        if !base.leq(l, k) {
            return precondition(format!(
                "{} does not lie below {}",
                base.label(l),
                base.label(k)
            ));
        }
        let mut out = Vec::new();
        for (&h, gens) in &self.generators {
            if base.leq(l, h) && !base.leq(k, h) {
                let inf = rs.inflation(h, l)?;
                out.extend(gens.iter().map(|g| inf.apply(g)));
            }
        }
        Ok(out)
    }

    /// `E_{K/L}^{-1} R(G/L)`.
    pub fn localize(&self, rs: &SplittingDiagram, k: usize, l: usize) -> Result<ProductRing> {
        rs.ring(l).localize(&self.euler_set(rs, k, l)?)
    }
}

/// Whether `E_{H/L}` and `⟨infl E_{H/K}, E_{K/L}⟩` have the same saturation:
/// every generator of each side is a unit after inverting the other.
pub fn transitivity_check(
    sys: &EulerSystem,
    rs: &SplittingDiagram,
    h: usize,
    k: usize,
    l: usize,
) -> Result<bool> {
    let base = rs.base();
    if !(base.leq(k, h) && base.leq(l, k)) {
        return precondition("transitivity needs a chain H ⊇ K ⊇ L");
    }
    let lhs = sys.euler_set(rs, h, l)?;
    let inf = rs.inflation(k, l)?;
    let mut rhs: Vec<RingElem> = sys
        .euler_set(rs, h, k)?
        .iter()
        .map(|g| inf.apply(g))
        .collect();
    rhs.extend(sys.euler_set(rs, k, l)?);
    let r = rs.ring(l);
    let a = r.localize(&lhs)?;
    let b = r.localize(&rhs)?;
    let to_a = RingMap::localization(r, &a)?;
    let to_b = RingMap::localization(r, &b)?;
    Ok(rhs.iter().all(|g| a.is_unit(&to_a.apply(g)))
        && lhs.iter().all(|g| b.is_unit(&to_b.apply(g))))
}

/// Renders a generator list as polynomial text per component.
pub fn render_generators(ring: &ProductRing, gens: &[RingElem]) -> Vec<Vec<String>> {
    gens.iter()
        .map(|g| {
            g.iter()
                .zip(ring.components())
                .map(|(x, c)| c.render(x))
                .collect()
        })
        .collect()
}
