use std::sync::Arc;

use serde::Serialize;

use super::Poset;
use crate::error::{construction, Result};

/// An object `(first ⊇ last)` of the pair category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairObj {
    pub first: usize,
    pub last: usize,
}

impl PairObj {
    pub fn new(poset: &Poset, first: usize, last: usize) -> Result<Self> {
        if !poset.leq(last, first) {
            return construction(format!(
                "{} does not contain {}",
                poset.label(first),
                poset.label(last)
            ));
        }
        Ok(PairObj { first, last })
    }

    pub fn diagonal(node: usize) -> Self {
        PairObj {
            first: node,
            last: node,
        }
    }

    pub fn label(&self, poset: &Poset) -> String {
        format!("({}⊇{})", poset.label(self.first), poset.label(self.last))
    }
}

/// How a nonidentity arrow between pairs moves its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairArrow {
    /// Same last term, larger first term.
    Horizontal,
    /// Same first term, smaller last term.
    Vertical,
    Mixed,
}

/// Pairs `(K ⊇ L)` ordered by `(K ⊇ L) ≤ (H ⊇ M)` iff `H ⊇ K ⊇ L ⊇ M`.
#[derive(Clone, Debug)]
pub struct PairPoset {
    base: Arc<Poset>,
    pairs: Vec<PairObj>,
}

impl PairPoset {
    pub fn new(base: Arc<Poset>) -> Self {
        let mut pairs = Vec::new();
        for first in 0..base.len() {
            for last in 0..base.len() {
                if base.leq(last, first) {
                    pairs.push(PairObj { first, last });
                }
            }
        }
        PairPoset { base, pairs }
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn pairs(&self) -> &[PairObj] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, p: PairObj) -> Option<usize> {
        self.pairs.iter().position(|&q| q == p)
    }

    pub fn leq(&self, a: PairObj, b: PairObj) -> bool {
        self.base.leq(a.first, b.first) && self.base.leq(b.last, a.last)
    }

    pub fn arrow_kind(&self, a: PairObj, b: PairObj) -> Option<PairArrow> {
        if a == b || !self.leq(a, b) {
            return None;
        }
        Some(if a.last == b.last {
            PairArrow::Horizontal
        } else if a.first == b.first {
            PairArrow::Vertical
        } else {
            PairArrow::Mixed
        })
    }

    /// Generating arrows: covers that are horizontal or vertical.
    pub fn generators(&self) -> Vec<(PairObj, PairObj, PairArrow)> {
        let mut out = Vec::new();
        for &a in &self.pairs {
            for &b in &self.pairs {
                let Some(kind) = self.arrow_kind(a, b) else {
                    continue;
                };
                if kind == PairArrow::Mixed {
                    continue;
                }
                let between = self
                    .pairs
                    .iter()
                    .any(|&c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b, kind));
                }
            }
        }
        out
    }
}
