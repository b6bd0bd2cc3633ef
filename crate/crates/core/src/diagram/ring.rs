use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::index::{EdgeKind, Index};
use crate::error::{construction, precondition, Error, Result};
use crate::poset::{Flag, FlagPoset, PairObj, PairPoset};
use crate::ring::{transitivity_check, EulerSystem, ProductRing, RingMap, SplittingDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// Localized values on flags.
    Coefficient,
    /// Localized values on pairs.
    Pair,
    /// Values pushed forward along a poset map.
    Pushforward,
}

/// A functor from an index category to products of graded rings; `maps`
/// holds a ring map for every relation `a ≤ b`.
#[derive(Clone, Debug)]
pub struct RingDiagram {
    index: Index,
    rings: Vec<ProductRing>,
    maps: BTreeMap<(usize, usize), RingMap>,
    flavor: Flavor,
}

impl RingDiagram {
    pub fn new(
        index: Index,
        rings: Vec<ProductRing>,
        mut maps: BTreeMap<(usize, usize), RingMap>,
        flavor: Flavor,
    ) -> Result<Self> {
        if rings.len() != index.len() {
            return construction("one ring per index object is required");
        }
        for (a, b) in index.relations() {
            if a == b {
                maps.entry((a, a))
                    .or_insert_with(|| RingMap::identity(&rings[a]));
            }
            let m = maps.get(&(a, b)).ok_or_else(|| {
                Error::Construction(format!(
                    "no ring map {} → {}",
                    index.label(a),
                    index.label(b)
                ))
            })?;
            if m.src_len() != rings[a].len() || m.tgt_len() != rings[b].len() {
                return construction(format!(
                    "ring map {} → {} has the wrong shape",
                    index.label(a),
                    index.label(b)
                ));
            }
            for j in 0..m.tgt_len() {
                let c = m.component(j);
                if c.src() != rings[a].component(m.src_of(j)) || c.tgt() != rings[b].component(j) {
                    return construction(format!(
                        "ring map {} → {} has mismatched components",
                        index.label(a),
                        index.label(b)
                    ));
                }
            }
        }
        let d = RingDiagram {
            index,
            rings,
            maps,
            flavor,
        };
        d.check_functoriality()?;
        Ok(d)
    }

    /// `R^f(F) = 𝓔⁻¹_{f(F)/l(F)} R(G/l(F))` with inflation maps.
    pub fn coefficient(
        rs: &SplittingDiagram,
        sys: &EulerSystem,
        flags: Arc<FlagPoset>,
    ) -> Result<Self> {
        if **flags.base() != **rs.base() {
            return precondition("flag poset and splitting diagram live on different posets");
        }
        check_transitive(rs, sys)?;
        let rings = flags
            .flags()
            .iter()
            .map(|f| sys.localize(rs, f.first(), f.last()))
            .collect::<Result<Vec<_>>>()?;
        let index = Index::Flags(flags);
        let mut maps = BTreeMap::new();
        for (a, b) in index.relations() {
            let inf = rs.inflation(index.last(a), index.last(b))?;
            maps.insert((a, b), inf.relocalize(&rings[a], &rings[b])?);
        }
        RingDiagram::new(index, rings, maps, Flavor::Coefficient)
    }

    /// `R^p(K ⊇ L) = 𝓔⁻¹_{K/L} R(G/L)`.
    pub fn pairs(rs: &SplittingDiagram, sys: &EulerSystem, pairs: Arc<PairPoset>) -> Result<Self> {
        if **pairs.base() != **rs.base() {
            return precondition("pair poset and splitting diagram live on different posets");
        }
        check_transitive(rs, sys)?;
        let rings = pairs
            .pairs()
            .iter()
            .map(|p| sys.localize(rs, p.first, p.last))
            .collect::<Result<Vec<_>>>()?;
        let index = Index::Pairs(pairs);
        let mut maps = BTreeMap::new();
        for (a, b) in index.relations() {
            let inf = rs.inflation(index.last(a), index.last(b))?;
            maps.insert((a, b), inf.relocalize(&rings[a], &rings[b])?);
        }
        RingDiagram::new(index, rings, maps, Flavor::Pair)
    }

    /// The flag diagram `F ↦ R^p(f(F) ⊇ l(F))`.
    pub fn pairs_to_flags(&self, flags: Arc<FlagPoset>) -> Result<Self> {
        if self.index.is_flags() {
            return precondition("expected a pair diagram");
        }
        let idx = Index::Flags(flags);
        let at = |i: usize| pair_of_flag(&self.index, &idx, i);
        let rings = (0..idx.len())
            .map(|i| Ok(self.rings[at(i)?].clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = BTreeMap::new();
        for (a, b) in idx.relations() {
            maps.insert((a, b), self.map(at(a)?, at(b)?).clone());
        }
        RingDiagram::new(idx, rings, maps, Flavor::Pair)
    }

    /// The pair diagram `(K ⊇ L) ↦ R^f(K ⊃ L)`; the map to `(H ⊇ M)` passes
    /// through the flag on `{H, K, L, M}`, whose middle faces must be
    /// identities.
    pub fn coefficient_to_pairs(&self, pairs: Arc<PairPoset>) -> Result<Self> {
        if !self.index.is_flags() {
            return precondition("expected a flag diagram");
        }
        self.check_middle_independence()?;
        let idx = Index::Pairs(pairs);
        let rings = (0..idx.len())
            .map(|i| Ok(self.rings[flag_of_pair(&self.index, idx.pair(i))?].clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = BTreeMap::new();
        for (a, b) in idx.relations() {
            let (pa, pb) = (idx.pair(a), idx.pair(b));
            let fa = flag_of_pair(&self.index, pa)?;
            let fb = flag_of_pair(&self.index, pb)?;
            let chain = chain_flag(&self.index, &[pb.first, pa.first, pa.last, pb.last])?;
            let via = self.map(fb, chain);
            if self.rings[fb] != self.rings[chain] || !via.is_identity() {
                return construction(format!(
                    "{} is not middle-independent",
                    self.index.label(chain)
                ));
            }
            maps.insert((a, b), self.map(fa, chain).clone());
        }
        RingDiagram::new(idx, rings, maps, Flavor::Pair)
    }

    pub fn index(&self) -> &Index {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.rings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn ring(&self, i: usize) -> &ProductRing {
        &self.rings[i]
    }

    pub fn rings(&self) -> &[ProductRing] {
        &self.rings
    }

    pub fn map(&self, a: usize, b: usize) -> &RingMap {
        self.maps
            .get(&(a, b))
            .unwrap_or_else(|| panic!("{} ≰ {}", self.index.label(a), self.index.label(b)))
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), RingMap> {
        &self.maps
    }

    /// Same values and maps, index compared by size.
    pub fn same_as(&self, other: &RingDiagram) -> bool {
        std::ptr::eq(self, other)
            || (self.index.len() == other.index.len()
                && self.rings == other.rings
                && self.maps == other.maps)
    }

    pub fn check_functoriality(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.index.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c == b || !self.index.leq(b, c) {
                        continue;
                    }
                    if self.map(a, b).then(self.map(b, c))? != *self.map(a, c) {
                        return construction(format!(
                            "ring maps not functorial along {} → {} → {}",
                            self.index.label(a),
                            self.index.label(b),
                            self.index.label(c)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Middle faces carry identity maps.
    pub fn check_middle_independence(&self) -> Result<()> {
        for (a, b) in self.index.edges(EdgeKind::Middle) {
            if self.rings[a] != self.rings[b] || !self.map(a, b).is_identity() {
                return construction(format!(
                    "middle face {} → {} is not an identity",
                    self.index.label(a),
                    self.index.label(b)
                ));
            }
        }
        Ok(())
    }
}

fn check_transitive(rs: &SplittingDiagram, sys: &EulerSystem) -> Result<()> {
    let base = rs.base();
    let n = base.len();
    for h in 0..n {
        for k in 0..n {
            if !base.lt(k, h) {
                continue;
            }
            for l in 0..n {
                if base.lt(l, k) && !transitivity_check(sys, rs, h, k, l)? {
                    return construction(format!(
                        "Euler system is not transitive on {} ⊃ {} ⊃ {}",
                        base.label(h),
                        base.label(k),
                        base.label(l)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Index of the pair `(f(F) ⊇ l(F))` for flag `i` of `flags`.
pub(crate) fn pair_of_flag(pairs: &Index, flags: &Index, i: usize) -> Result<usize> {
    let f = flags.flag(i);
    pairs
        .index_of_pair(PairObj {
            first: f.first(),
            last: f.last(),
        })
        .ok_or_else(|| Error::Index(format!("no pair for {}", flags.label(i))))
}

/// Index of the flag `(K ⊃ L)`, or `(K)` when `K = L`.
pub(crate) fn flag_of_pair(flags: &Index, p: PairObj) -> Result<usize> {
    let terms = if p.first == p.last {
        vec![p.first]
    } else {
        vec![p.first, p.last]
    };
    chain_flag(flags, &terms)
}

/// The flag on a weakly decreasing list of nodes, repeats removed.
pub(crate) fn chain_flag(flags: &Index, nodes: &[usize]) -> Result<usize> {
    let mut terms: Vec<usize> = Vec::with_capacity(nodes.len());
    for &n in nodes {
        if terms.last() != Some(&n) {
            terms.push(n);
        }
    }
    let f = Flag::new(flags.base(), terms)?;
    flags
        .index_of_flag(&f)
        .ok_or_else(|| Error::Index("chain is not in the flag poset".into()))
}
