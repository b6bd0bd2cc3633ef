use std::sync::Arc;

use crate::poset::{Flag, FlagPoset, PairArrow, PairObj, PairPoset, Poset};

/// The index category of a diagram: flags under the subflag relation or
/// pairs `(K ⊇ L)` under `(K ⊇ L) ≤ (H ⊇ M)` iff `H ⊇ K ⊇ L ⊇ M`. Arrows go
/// upwards, so a diagram has a map `X(a) → X(b)` whenever `a ≤ b`.
#[derive(Clone, Debug)]
pub enum Index {
    Flags(Arc<FlagPoset>),
    Pairs(Arc<PairPoset>),
}

/// The arrows a predicate inspects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// `∂₀F → F` for flags, same-last arrows for pairs.
    Qc,
    /// `∂_sF → F` for flags, same-first arrows for pairs.
    Extended,
    /// `∂_iF → F` with `0 < i < s`.
    Middle,
}

impl Index {
    pub fn base(&self) -> &Arc<Poset> {
        match self {
            Index::Flags(f) => f.base(),
            Index::Pairs(p) => p.base(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Index::Flags(f) => f.len(),
            Index::Pairs(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_flags(&self) -> bool {
        matches!(self, Index::Flags(_))
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            Index::Flags(f) => f.label(i),
            Index::Pairs(p) => p.pairs()[i].label(p.base()),
        }
    }

    pub fn flag(&self, i: usize) -> &Flag {
        match self {
            Index::Flags(f) => f.flag(i),
            Index::Pairs(_) => panic!("flag of a pair index"),
        }
    }

    pub fn pair(&self, i: usize) -> PairObj {
        match self {
            Index::Pairs(p) => p.pairs()[i],
            Index::Flags(_) => panic!("pair of a flag index"),
        }
    }

    /// First and last terms.
    pub fn first(&self, i: usize) -> usize {
        match self {
            Index::Flags(f) => f.flag(i).first(),
            Index::Pairs(p) => p.pairs()[i].first,
        }
    }

    pub fn last(&self, i: usize) -> usize {
        match self {
            Index::Flags(f) => f.flag(i).last(),
            Index::Pairs(p) => p.pairs()[i].last,
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match self {
            Index::Flags(f) => f.flag(a).is_subflag_of(f.flag(b)),
            Index::Pairs(p) => p.leq(p.pairs()[a], p.pairs()[b]),
        }
    }

    /// The object `(K)` or `(K ⊇ K)` for a base node.
    pub fn diagonal(&self, k: usize) -> usize {
        match self {
            Index::Flags(f) => f.index_of(&Flag::single(k)).expect("every node is a flag"),
            Index::Pairs(p) => p
                .index_of(PairObj::diagonal(k))
                .expect("every node is a pair"),
        }
    }

    pub fn index_of_flag(&self, fl: &Flag) -> Option<usize> {
        match self {
            Index::Flags(f) => f.index_of(fl),
            Index::Pairs(_) => None,
        }
    }

    pub fn index_of_pair(&self, q: PairObj) -> Option<usize> {
        match self {
            Index::Pairs(p) => p.index_of(q),
            Index::Flags(_) => None,
        }
    }

    /// All `(a, b)` with `a ≤ b`, identities included.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edges(&self, kind: EdgeKind) -> Vec<(usize, usize)> {
        match self {
            Index::Flags(fp) => {
                let mut out = Vec::new();
                for (b, f) in fp.flags().iter().enumerate() {
                    let s = f.len();
                    if s == 0 {
                        continue;
                    }
                    let faces: Vec<usize> = match kind {
                        EdgeKind::Qc => vec![0],
                        EdgeKind::Extended => vec![s],
                        EdgeKind::Middle => (1..s).collect(),
                    };
                    for i in faces {
                        let a = fp
                            .index_of(&f.face(i).expect("face exists"))
                            .expect("faces are flags");
                        out.push((a, b));
                    }
                }
                out
            }
            Index::Pairs(pp) => {
                let want = match kind {
                    EdgeKind::Qc => PairArrow::Horizontal,
                    EdgeKind::Extended => PairArrow::Vertical,
                    EdgeKind::Middle => return Vec::new(),
                };
                let ps = pp.pairs();
                let mut out = Vec::new();
                for a in 0..ps.len() {
                    for b in 0..ps.len() {
                        if pp.arrow_kind(ps[a], ps[b]) == Some(want) {
                            out.push((a, b));
                        }
                    }
                }
                out
            }
        }
    }

    /// Generating arrows: faces for flags, horizontal and vertical covers for
    /// pairs.
    pub fn generators(&self) -> Vec<(usize, usize)> {
        match self {
            Index::Flags(_) => {
                let mut out = self.edges(EdgeKind::Qc);
                out.extend(self.edges(EdgeKind::Extended));
                out.extend(self.edges(EdgeKind::Middle));
                out.sort();
                out.dedup();
                out
            }
            Index::Pairs(pp) => pp
                .generators()
                .into_iter()
                .map(|(a, b, _)| (pp.index_of(a).unwrap(), pp.index_of(b).unwrap()))
                .collect(),
        }
    }
}
