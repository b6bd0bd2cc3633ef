//! Finite posets of subgroups and dimensions, poset maps, flags, pairs and
//! multiplicity systems.

mod dot;
mod flag;
mod multiplicity;
mod pairs;

pub use dot::{flag_poset_dot, pair_poset_dot, poset_dot};
pub use flag::{Flag, FlagPoset};
pub use multiplicity::MultiplicitySystem;
pub use pairs::{PairArrow, PairObj, PairPoset};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{construction, precondition, Error, Result};
use crate::lattice::ClosedSubgroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Subgroup(ClosedSubgroup),
    Dimension(usize),
}

/// A finite poset with a maximum. `leq(a, b)` means `a ≤ b`; for posets of
/// subgroups this is (cotoral) inclusion `a ⊆ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    name: String,
    nodes: Vec<Node>,
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    top: usize,
}

impl Poset {
    /// Builds a poset from nodes and an order relation, verifying the partial
    /// order axioms and the existence of a maximum.
    pub fn from_relation(
        name: impl Into<String>,
        nodes: Vec<Node>,
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return construction("empty poset");
        }
        for a in 0..n {
            if !leq[a][a] {
                return construction(format!("relation not reflexive at {}", labels[a]));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return construction(format!(
                        "relation not antisymmetric: {} and {}",
                        labels[a], labels[b]
                    ));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return construction(format!(
                            "relation not transitive: {} ≤ {} ≤ {}",
                            labels[a], labels[b], labels[c]
                        ));
                    }
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|a| leq[a][t]))
            .ok_or_else(|| Error::Construction("poset has no maximum".into()))?;
        Ok(Poset {
            name: name.into(),
            nodes,
            labels,
            leq,
            top,
        })
    }

    fn subgroup_poset(
        name: &str,
        universe: &[ClosedSubgroup],
        rel: impl Fn(&ClosedSubgroup, &ClosedSubgroup) -> Result<bool>,
    ) -> Result<Self> {
        let mut nodes: Vec<ClosedSubgroup> = Vec::new();
        for h in universe {
            if !nodes.contains(h) {
                nodes.push(h.clone());
            }
        }
        let r = nodes[0].ambient_rank();
        if !nodes.iter().any(|h| h.dim() == r) {
            return construction(format!("universe for {name} is missing the torus T^{r}"));
        }
        let n = nodes.len();
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq[a][b] = rel(&nodes[a], &nodes[b])?;
            }
        }
        let labels = nodes.iter().map(|h| h.name().to_string()).collect();
        Self::from_relation(
            name,
            nodes.into_iter().map(Node::Subgroup).collect(),
            labels,
            leq,
        )
    }

    /// The connected subgroups of the universe under inclusion.
    pub fn sigma_c(universe: &[ClosedSubgroup]) -> Result<Self> {
        if universe.is_empty() {
            return construction("empty universe");
        }
        if let Some(h) = universe.iter().find(|h| !h.is_connected()) {
            return construction(format!("{} is not connected", h.name()));
        }
        Self::subgroup_poset("sigma_c", universe, |a, b| b.contains(a))
    }

    /// The universe under cotoral inclusion.
    pub fn sigma_a(universe: &[ClosedSubgroup]) -> Result<Self> {
        if universe.is_empty() {
            return construction("empty universe");
        }
        Self::subgroup_poset("sigma_a", universe, |a, b| a.is_cotoral_in(b))
    }

    /// The chain `0 < 1 < … < r`.
    pub fn sigma_d(r: usize) -> Self {
        let n = r + 1;
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Poset {
            name: "sigma_d".into(),
            nodes: (0..n).map(Node::Dimension).collect(),
            labels: (0..n).map(|i| i.to_string()).collect(),
            leq,
            top: r,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn subgroup(&self, i: usize) -> Option<&ClosedSubgroup> {
        match &self.nodes[i] {
            Node::Subgroup(h) => Some(h),
            Node::Dimension(_) => None,
        }
    }

    /// The subgroup at node `i`; panics on dimension posets.
    pub fn group(&self, i: usize) -> &ClosedSubgroup {
        self.subgroup(i).expect("poset node is not a subgroup")
    }

    pub fn index_of(&self, h: &ClosedSubgroup) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| matches!(n, Node::Subgroup(g) if g == h))
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|a| self.leq[b][a]))
    }

    /// Maximal elements of `Σ ∖ {top}`.
    pub fn maximal(&self) -> Vec<usize> {
        let t = self.top;
        (0..self.len())
            .filter(|&m| m != t && !(0..self.len()).any(|n| n != t && self.lt(m, n)))
            .collect()
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Codimension of the subgroup at a node, or `r - i` for dimension nodes.
    pub fn codim(&self, i: usize) -> usize {
        match &self.nodes[i] {
            Node::Subgroup(h) => h.codim(),
            Node::Dimension(d) => match &self.nodes[self.top] {
                Node::Dimension(r) => r - d,
                Node::Subgroup(_) => unreachable!(),
            },
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            name: self.name.clone(),
            nodes: self.labels.clone(),
            top: self.labels[self.top].clone(),
            relations: (0..self.len())
                .flat_map(|a| (0..self.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| self.lt(a, b))
                .map(|(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetJson {
    pub name: String,
    pub nodes: Vec<String>,
    pub top: String,
    /// Strict relations `a < b`.
    pub relations: Vec<(String, String)>,
}

/// A monotone surjection of posets preserving the maximum.
#[derive(Clone, Debug)]
pub struct PosetMap {
    domain: Arc<Poset>,
    codomain: Arc<Poset>,
    assignment: Vec<usize>,
}

impl PosetMap {
    pub fn new(domain: Arc<Poset>, codomain: Arc<Poset>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != domain.len() {
            return construction("assignment length differs from domain size");
        }
        if assignment.iter().any(|&b| b >= codomain.len()) {
            return construction("assignment leaves the codomain");
        }
        for a in 0..domain.len() {
            for b in 0..domain.len() {
                if domain.leq(a, b) && !codomain.leq(assignment[a], assignment[b]) {
                    return construction(format!(
                        "map is not monotone at {} ≤ {}",
                        domain.label(a),
                        domain.label(b)
                    ));
                }
            }
        }
        for c in 0..codomain.len() {
            if !assignment.contains(&c) {
                return construction(format!("map misses {}", codomain.label(c)));
            }
        }
        if assignment[domain.top()] != codomain.top() {
            return construction("map does not preserve the maximum");
        }
        Ok(PosetMap {
            domain,
            codomain,
            assignment,
        })
    }

    pub fn identity(p: Arc<Poset>) -> Self {
        let n = p.len();
        PosetMap {
            domain: p.clone(),
            codomain: p,
            assignment: (0..n).collect(),
        }
    }

    /// The dimension map onto `[0, r]`.
    pub fn dimension(sigma: Arc<Poset>, sigma_d: Arc<Poset>) -> Result<Self> {
        let mut assignment = Vec::with_capacity(sigma.len());
        for i in 0..sigma.len() {
            let h = sigma
                .subgroup(i)
                .ok_or_else(|| Error::Precondition("dimension map needs subgroup nodes".into()))?;
            assignment.push(h.dim());
        }
        for d in 0..sigma_d.len() {
            if !assignment.contains(&d) {
                return construction(format!("no subgroup of dimension {d} in the universe"));
            }
        }
        Self::new(sigma, sigma_d, assignment)
    }

    /// Identity components, from the cotoral poset to the connected one.
    pub fn identity_components(sigma_a: Arc<Poset>, sigma_c: Arc<Poset>) -> Result<Self> {
        let mut assignment = Vec::with_capacity(sigma_a.len());
        for i in 0..sigma_a.len() {
            let e = sigma_a.group(i).identity_component();
            match sigma_c.index_of(&e) {
                Some(j) => assignment.push(j),
                None => {
                    return construction(format!(
                        "identity component of {} missing from sigma_c",
                        sigma_a.label(i)
                    ))
                }
            }
        }
        Self::new(sigma_a, sigma_c, assignment)
    }

    pub fn domain(&self) -> &Arc<Poset> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Poset> {
        &self.codomain
    }

    pub fn apply(&self, a: usize) -> usize {
        self.assignment[a]
    }

    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.domain.len())
            .filter(|&a| self.assignment[a] == b)
            .collect()
    }

    /// Whether `a < b` implies `π(a) < π(b)`; required to act on flags.
    pub fn is_strict(&self) -> bool {
        let d = &self.domain;
        (0..d.len()).all(|a| {
            (0..d.len())
                .all(|b| !d.lt(a, b) || self.codomain.lt(self.assignment[a], self.assignment[b]))
        })
    }

    /// Maximal elements map onto maximal elements.
    pub fn check_euler_compatible(&self) -> Result<()> {
        let dm = self.domain.maximal();
        let cm = self.codomain.maximal();
        let image: Vec<usize> = dm.iter().map(|&m| self.assignment[m]).collect();
        if image.iter().any(|b| !cm.contains(b)) || cm.iter().any(|b| !image.contains(b)) {
            return precondition("maximal elements do not map onto maximal elements");
        }
        Ok(())
    }

    pub fn apply_flag(&self, f: &Flag) -> Result<Flag> {
        let terms: Vec<usize> = f.terms().iter().map(|&t| self.assignment[t]).collect();
        for w in terms.windows(2) {
            if !self.codomain.lt(w[1], w[0]) {
                return precondition("poset map is not strict on this flag");
            }
        }
        Ok(Flag::new_unchecked(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1() -> Vec<ClosedSubgroup> {
        vec![
            ClosedSubgroup::trivial(1),
            ClosedSubgroup::cyclic(2),
            ClosedSubgroup::cyclic(3),
            ClosedSubgroup::torus(1),
        ]
    }

    #[test]
    fn rank1_sigma_a_shape() {
        let p = Poset::sigma_a(&rank1()).unwrap();
        assert_eq!(p.top(), 3);
        let strict: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(a, b)| p.lt(a, b))
            .collect();
        assert_eq!(strict, vec![(0, 3), (1, 3), (2, 3)]);
        assert_eq!(p.maximal(), vec![0, 1, 2]);
        assert_eq!(p.bottom(), None);
    }

    #[test]
    fn sigma_d_chain() {
        let p = Poset::sigma_d(2);
        assert!(p.lt(0, 1) && p.lt(1, 2) && p.lt(0, 2));
        assert_eq!(p.maximal(), vec![1]);
        assert_eq!(p.bottom(), Some(0));
    }

    #[test]
    fn dimension_gap_is_an_error() {
        let u = vec![ClosedSubgroup::trivial(2), ClosedSubgroup::torus(2)];
        let c = Arc::new(Poset::sigma_c(&u).unwrap());
        assert!(PosetMap::dimension(c, Arc::new(Poset::sigma_d(2))).is_err());
    }
}
