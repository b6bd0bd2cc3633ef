use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{Poset, PosetMap};
use crate::error::{construction, Error, Result};

/// A strictly decreasing chain `H₀ > H₁ > … > H_s` of poset nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flag(Vec<usize>);

impl Flag {
    pub fn new(poset: &Poset, terms: Vec<usize>) -> Result<Self> {
        if terms.is_empty() {
            return construction("a flag needs at least one term");
        }
        for w in terms.windows(2) {
            if !poset.lt(w[1], w[0]) {
                return construction(format!(
                    "flag terms {} and {} are not strictly decreasing",
                    poset.label(w[0]),
                    poset.label(w[1])
                ));
            }
        }
        Ok(Flag(terms))
    }

    pub(crate) fn new_unchecked(terms: Vec<usize>) -> Self {
        Flag(terms)
    }

    pub fn single(node: usize) -> Self {
        Flag(vec![node])
    }

    pub fn terms(&self) -> &[usize] {
        &self.0
    }

    /// `s = |F|`, one less than the number of terms.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// `∂_i F`, omitting term `i`.
    pub fn face(&self, i: usize) -> Result<Flag> {
        if self.0.len() < 2 || i >= self.0.len() {
            return Err(Error::Index(format!(
                "face ∂_{i} of a flag of length {}",
                self.len()
            )));
        }
        let mut t = self.0.clone();
        t.remove(i);
        Ok(Flag(t))
    }

    pub fn is_subflag_of(&self, other: &Flag) -> bool {
        self.0.iter().all(|t| other.0.contains(t))
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.contains(&node)
    }

    /// All nonempty subflags, in increasing bitmask order.
    pub fn subflags(&self) -> Vec<Flag> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| {
                Flag(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    /// The unique subflag `E` of `self` with `π(E) = ē`, for `ē ⊆ π(self)`.
    pub fn subflag_over(&self, ebar: &Flag, pi: &PosetMap) -> Result<Flag> {
        let image = pi.apply_flag(self)?;
        if !ebar.is_subflag_of(&image) {
            return Err(Error::Precondition(
                "target is not a subflag of the image flag".into(),
            ));
        }
        let terms: Vec<usize> = self
            .0
            .iter()
            .copied()
            .filter(|&t| ebar.0.contains(&pi.apply(t)))
            .collect();
        Ok(Flag(terms))
    }

    pub fn label(&self, poset: &Poset) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&t| poset.label(t)).collect();
        format!("({})", parts.join("⊃"))
    }
}

/// All flags of a poset, ordered by length and then lexicographically (in
/// node order), with the subflag relation.
#[derive(Clone, Debug)]
pub struct FlagPoset {
    base: Arc<Poset>,
    flags: Vec<Flag>,
    index: BTreeMap<Flag, usize>,
}

impl FlagPoset {
    pub fn new(base: Arc<Poset>, cap: usize) -> Result<Self> {
        let mut flags: Vec<Flag> = Vec::new();
        let mut layer: Vec<Flag> = (0..base.len()).map(Flag::single).collect();
        while !layer.is_empty() {
            flags.extend(layer.iter().cloned());
            if flags.len() > cap {
                return Err(Error::SizeCap(format!("flag poset exceeds {cap} flags")));
            }
            let mut next = Vec::new();
            for f in &layer {
                for n in 0..base.len() {
                    if base.lt(n, f.last()) {
                        let mut t = f.0.clone();
                        t.push(n);
                        next.push(Flag(t));
                    }
                }
            }
            next.sort();
            layer = next;
        }
        let index = flags
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Ok(FlagPoset { base, flags, index })
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, i: usize) -> &Flag {
        &self.flags[i]
    }

    pub fn index_of(&self, f: &Flag) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Flags with `s + 1` terms.
    pub fn of_length(&self, s: usize) -> Vec<&Flag> {
        self.flags.iter().filter(|f| f.len() == s).collect()
    }

    pub fn label(&self, i: usize) -> String {
        self.flags[i].label(&self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ClosedSubgroup;

    #[test]
    fn rank1_sigma_c_flags() {
        let u = vec![ClosedSubgroup::trivial(1), ClosedSubgroup::torus(1)];
        let p = Arc::new(Poset::sigma_c(&u).unwrap());
        let fp = FlagPoset::new(p.clone(), 100).unwrap();
        assert_eq!(fp.len(), 3);
        let long = fp.of_length(1);
        assert_eq!(long.len(), 1);
        assert_eq!(long[0].terms(), &[1, 0]);
        assert_eq!(long[0].face(0).unwrap(), Flag::single(0));
        assert_eq!(long[0].face(1).unwrap(), Flag::single(1));
        assert!(long[0].face(2).is_err());
        assert!(Flag::single(0).face(0).is_err());
    }
}
