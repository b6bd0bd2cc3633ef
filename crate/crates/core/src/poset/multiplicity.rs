use std::sync::Arc;

use super::{Poset, PosetMap};
use crate::error::{construction, Result};

/// Fibers of the identity-component map `q : Σ_a → Σ_c` together with the
/// pushforwards `i_* : F/L → F/K` for `L ⊆ K`.
#[derive(Clone, Debug)]
pub struct MultiplicitySystem {
    q: PosetMap,
    fibers: Vec<Vec<usize>>,
    /// `push[l][k][j]` = index in `fibers[k]` of `i_*(fibers[l][j])`, when `l ≤ k`.
    push: Vec<Vec<Option<Vec<usize>>>>,
}

impl MultiplicitySystem {
    pub fn new(sigma_a: Arc<Poset>, sigma_c: Arc<Poset>) -> Result<Self> {
        let q = PosetMap::identity_components(sigma_a.clone(), sigma_c.clone())?;
        let fibers: Vec<Vec<usize>> = (0..sigma_c.len()).map(|c| q.fiber(c)).collect();
        if fibers[sigma_c.top()].len() != 1 {
            return construction("fiber over the top is not a singleton");
        }
        for (c, fib) in fibers.iter().enumerate() {
            for &a in fib {
                for &b in fib {
                    if a != b && sigma_a.leq(a, b) {
                        return construction(format!(
                            "fiber over {} has comparable members {} and {}",
                            sigma_c.label(c),
                            sigma_a.label(a),
                            sigma_a.label(b)
                        ));
                    }
                }
            }
        }
        let n = sigma_c.len();
        let mut push = vec![vec![None; n]; n];
        for l in 0..n {
            for k in 0..n {
                if !sigma_c.leq(l, k) {
                    continue;
                }
                let kg = sigma_c.group(k);
                let mut map = Vec::with_capacity(fibers[l].len());
                for &lt in &fibers[l] {
                    let joined = sigma_a.group(lt).join_istar(kg)?;
                    let Some(kt) = sigma_a.index_of(&joined) else {
                        return construction(format!(
                            "{}·{} is missing from the universe",
                            sigma_a.label(lt),
                            sigma_c.label(k)
                        ));
                    };
                    // uniqueness: exactly one member of F/K lies cotorally above lt
                    let above: Vec<usize> = fibers[k]
                        .iter()
                        .copied()
                        .filter(|&h| sigma_a.leq(lt, h))
                        .collect();
                    if above != vec![kt] {
                        return construction(format!(
                            "no unique lift of {} over {}",
                            sigma_a.label(lt),
                            sigma_c.label(k)
                        ));
                    }
                    map.push(fibers[k].iter().position(|&h| h == kt).unwrap());
                }
                if (0..fibers[k].len()).any(|j| !map.contains(&j)) {
                    return construction(format!(
                        "pushforward from {} to {} is not surjective",
                        sigma_c.label(l),
                        sigma_c.label(k)
                    ));
                }
                push[l][k] = Some(map);
            }
        }
        Ok(MultiplicitySystem { q, fibers, push })
    }

    pub fn q(&self) -> &PosetMap {
        &self.q
    }

    pub fn sigma_a(&self) -> &Arc<Poset> {
        self.q.domain()
    }

    pub fn sigma_c(&self) -> &Arc<Poset> {
        self.q.codomain()
    }

    /// `F/K` as Σ_a node indices, in node order.
    pub fn fiber(&self, k: usize) -> &[usize] {
        &self.fibers[k]
    }

    /// Position in `F/K` of `i_*` applied to position `j` of `F/L`.
    pub fn push(&self, l: usize, k: usize, j: usize) -> usize {
        self.push[l][k]
            .as_ref()
            .expect("pushforward along a non-inclusion")[j]
    }

    /// `i_*` on Σ_a node indices.
    pub fn push_node(&self, l: usize, k: usize, lt: usize) -> usize {
        let j = self.fibers[l]
            .iter()
            .position(|&x| x == lt)
            .expect("node outside fiber");
        self.fibers[k][self.push(l, k, j)]
    }
}
