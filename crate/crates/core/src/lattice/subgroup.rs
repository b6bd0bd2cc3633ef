use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Lattice;
use crate::error::{Error, Result};

/// A closed subgroup of the torus `T^r`, encoded by the lattice of characters
/// vanishing on it. Identity (equality, hashing, order) ignores the name.
#[derive(Clone)]
pub struct ClosedSubgroup {
    name: String,
    annihilator: Lattice,
}

impl PartialEq for ClosedSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.annihilator == other.annihilator
    }
}
impl Eq for ClosedSubgroup {}

impl Hash for ClosedSubgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.annihilator.hash(state);
    }
}

impl PartialOrd for ClosedSubgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ClosedSubgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.annihilator.cmp(&other.annihilator)
    }
}

impl fmt::Debug for ClosedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.annihilator.basis())
    }
}

impl fmt::Display for ClosedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl ClosedSubgroup {
    pub fn new(name: impl Into<String>, annihilator: Lattice) -> Self {
        ClosedSubgroup {
            name: name.into(),
            annihilator,
        }
    }

    pub fn from_annihilator(name: impl Into<String>, rank: usize, rows: &[Vec<i64>]) -> Self {
        Self::new(name, Lattice::from_i64(rank, rows))
    }

    /// The whole torus `T^r`.
    pub fn torus(rank: usize) -> Self {
        let name = if rank == 1 {
            "T".to_string()
        } else {
            format!("T{rank}")
        };
        Self::new(name, Lattice::zero(rank))
    }

    pub fn trivial(rank: usize) -> Self {
        Self::new("1", Lattice::full(rank))
    }

    /// The cyclic subgroup of order `n` in the circle.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        let name = if n == 1 {
            "1".to_string()
        } else {
            format!("C{n}")
        };
        Self::new(name, Lattice::from_i64(1, &[vec![n as i64]]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ambient_rank(&self) -> usize {
        self.annihilator.ambient_rank()
    }

    pub fn annihilator(&self) -> &Lattice {
        &self.annihilator
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank() - self.annihilator.rank()
    }

    pub fn codim(&self) -> usize {
        self.annihilator.rank()
    }

    pub fn is_connected(&self) -> bool {
        self.annihilator.is_saturated()
    }

    /// Number of components, `|H / H_e|`.
    pub fn component_count(&self) -> BigInt {
        self.annihilator.saturation_index()
    }

    fn check_rank(&self, other: &ClosedSubgroup) -> Result<()> {
        if self.ambient_rank() != other.ambient_rank() {
            return Err(Error::RankMismatch(
                self.ambient_rank(),
                other.ambient_rank(),
            ));
        }
        Ok(())
    }

    /// Whether `self ⊇ k`.
    pub fn contains(&self, k: &ClosedSubgroup) -> Result<bool> {
        self.check_rank(k)?;
        Ok(self.annihilator.is_sublattice_of(&k.annihilator))
    }

    pub fn identity_component(&self) -> ClosedSubgroup {
        let sat = self.annihilator.saturate();
        if sat == self.annihilator {
            return self.clone();
        }
        ClosedSubgroup::new(format!("{}°", self.name), sat)
    }

    /// Whether `self ⊆ k` with `k / self` a torus.
    pub fn is_cotoral_in(&self, k: &ClosedSubgroup) -> Result<bool> {
        if !k.contains(self)? {
            return Ok(false);
        }
        Ok(self.annihilator.quotient_torsion_free(&k.annihilator))
    }

    /// `self · k` for a connected `k` containing the identity component of `self`.
    pub fn join_istar(&self, k: &ClosedSubgroup) -> Result<ClosedSubgroup> {
        self.check_rank(k)?;
        if !k.is_connected() {
            return Err(Error::Precondition(format!("{} is not connected", k.name)));
        }
        if !k.contains(&self.identity_component())? {
            return Err(Error::Precondition(format!(
                "identity component of {} is not contained in {}",
                self.name, k.name
            )));
        }
        let ann = self.annihilator.intersect(&k.annihilator);
        if ann == k.annihilator {
            return Ok(k.clone());
        }
        if ann == self.annihilator {
            return Ok(self.clone());
        }
        Ok(ClosedSubgroup::new(
            format!("{}·{}", self.name, k.name),
            ann,
        ))
    }

    pub fn to_json(&self) -> Result<SubgroupJson> {
        let rows = self
            .annihilator
            .basis()
            .row_vecs()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64().ok_or_else(|| {
                            Error::Construction(format!("annihilator entry {x} exceeds i64"))
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgroupJson {
            name: self.name.clone(),
            ambient_rank: self.ambient_rank(),
            annihilator_basis: rows,
        })
    }

    pub fn from_json(j: &SubgroupJson) -> Result<Self> {
        if j.annihilator_basis
            .iter()
            .any(|r| r.len() != j.ambient_rank)
        {
            return Err(Error::Construction(format!(
                "annihilator rows of {} do not have length {}",
                j.name, j.ambient_rank
            )));
        }
        Ok(Self::from_annihilator(
            j.name.clone(),
            j.ambient_rank,
            &j.annihilator_basis,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub name: String,
    pub ambient_rank: usize,
    pub annihilator_basis: Vec<Vec<i64>>,
}

/// A character of `T^r`, i.e. an element of ℤ^r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character(pub Vec<BigInt>);

impl Character {
    pub fn from_i64(v: &[i64]) -> Self {
        Character(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_trivial_on(&self, h: &ClosedSubgroup) -> bool {
        h.annihilator().contains_vector(&self.0)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClosureReport {
    pub input: usize,
    pub added_identity_components: Vec<String>,
    pub added_joins: Vec<String>,
}

/// Closes a universe under identity components and `join_istar`, failing if
/// the result would exceed `cap` subgroups. Input order is preserved, with
/// additions appended.
pub fn close_universe(
    input: &[ClosedSubgroup],
    cap: usize,
) -> Result<(Vec<ClosedSubgroup>, ClosureReport)> {
    let mut out: Vec<ClosedSubgroup> = Vec::new();
    for h in input {
        if !out.contains(h) {
            out.push(h.clone());
        }
    }
    let mut report = ClosureReport {
        input: out.len(),
        ..Default::default()
    };
    let guard = |n: usize| -> Result<()> {
        if n > cap {
            Err(Error::SizeCap(format!(
                "universe closure exceeds {cap} subgroups"
            )))
        } else {
            Ok(())
        }
    };
    guard(out.len())?;
    loop {
        let mut added = false;
        for i in 0..out.len() {
            let e = out[i].identity_component();
            if !out.contains(&e) {
                report.added_identity_components.push(e.name().to_string());
                out.push(e);
                added = true;
                guard(out.len())?;
            }
        }
        let snapshot = out.clone();
        for l in &snapshot {
            let le = l.identity_component();
            for k in snapshot.iter().filter(|k| k.is_connected()) {
                if k.contains(&le)? {
                    let j = l.join_istar(k)?;
                    if !out.contains(&j) {
                        report.added_joins.push(j.name().to_string());
                        out.push(j);
                        added = true;
                        guard(out.len())?;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    Ok((out, report))
}
