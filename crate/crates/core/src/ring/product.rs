//! Finite products of component rings and componentwise ring maps.

use serde::{Deserialize, Serialize};

use super::comp::{CompRing, CompRingJson, CompRingMap, CompRingMapJson, Fraction};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `∏_j R_j`; the idempotent `e_j` is the unit of component `j`. Component
/// labels are descriptive and do not take part in equality.
#[derive(Clone, Debug, Eq)]
pub struct ProductRing {
    components: Vec<CompRing>,
    labels: Vec<String>,
}

impl PartialEq for ProductRing {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

pub type RingElem = Vec<Fraction>;

impl ProductRing {
    pub fn new(components: Vec<CompRing>, labels: Vec<String>) -> Self {
        assert_eq!(components.len(), labels.len());
        ProductRing { components, labels }
    }

    pub fn single(r: CompRing, label: impl Into<String>) -> Self {
        ProductRing {
            components: vec![r],
            labels: vec![label.into()],
        }
    }

    pub fn components(&self) -> &[CompRing] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &CompRing {
        &self.components[j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn concat(parts: &[ProductRing]) -> ProductRing {
        let mut components = Vec::new();
        let mut labels = Vec::new();
        for p in parts {
            components.extend(p.components.iter().cloned());
            labels.extend(p.labels.iter().cloned());
        }
        ProductRing { components, labels }
    }

    pub fn sub_ring(&self, range: std::ops::Range<usize>) -> ProductRing {
        ProductRing {
            components: self.components[range.clone()].to_vec(),
            labels: self.labels[range].to_vec(),
        }
    }

    pub fn one(&self) -> RingElem {
        self.components.iter().map(|c| c.one()).collect()
    }

    pub fn zero(&self) -> RingElem {
        self.components.iter().map(|c| c.zero()).collect()
    }

    /// The idempotent of component `j`.
    pub fn idempotent(&self, j: usize) -> RingElem {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| if i == j { c.one() } else { c.zero() })
            .collect()
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.components
            .iter()
            .zip(a.iter().zip(b))
            .map(|(r, (x, y))| r.add(x, y))
            .collect()
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.components
            .iter()
            .zip(a.iter().zip(b))
            .map(|(r, (x, y))| r.mul(x, y))
            .collect()
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.components.iter().zip(a).all(|(r, x)| r.is_unit(x))
    }

    /// Localizes every component at the corresponding components of `elems`.
    /// Components that are already units are skipped; zero components are
    /// rejected.
    pub fn localize(&self, elems: &[RingElem]) -> Result<ProductRing> {
        let mut comps = Vec::with_capacity(self.len());
        for (j, r) in self.components.iter().enumerate() {
            let mut forms: Vec<Poly> = Vec::new();
            for e in elems {
                let x = &e[j];
                if r.is_zero(x) {
                    return Err(Error::Uncertified(format!(
                        "component {} of an inverted element is zero",
                        self.labels[j]
                    )));
                }
                if r.is_unit(x) {
                    continue;
                }
                if x.den.iter().any(|&d| d > 0) {
                    return Err(Error::Unsupported(
                        "inverting a non-polynomial element".into(),
                    ));
                }
                forms.push(x.num.clone());
            }
            comps.push(r.localize(&forms)?);
        }
        Ok(ProductRing {
            components: comps,
            labels: self.labels.clone(),
        })
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.describe()).collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("∏({})", parts.join(" × "))
        }
    }

    pub fn to_json(&self) -> ProductRingJson {
        ProductRingJson {
            labels: self.labels.clone(),
            components: self.components.iter().map(|c| c.to_json()).collect(),
        }
    }

    pub fn from_json(j: &ProductRingJson) -> Result<Self> {
        let comps = j
            .components
            .iter()
            .map(CompRing::from_json)
            .collect::<Result<Vec<_>>>()?;
        if comps.len() != j.labels.len() {
            return Err(Error::Construction("component labels do not match".into()));
        }
        Ok(ProductRing::new(comps, j.labels.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRingJson {
    pub labels: Vec<String>,
    pub components: Vec<CompRingJson>,
}

/// A ring map `∏_i A_i → ∏_j B_j` that is, on each target component `j`,
/// a map `A_{src(j)} → B_j` composed with the projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    src_len: usize,
    src_index: Vec<usize>,
    maps: Vec<CompRingMap>,
}

impl RingMap {
    pub fn new(
        src: &ProductRing,
        tgt: &ProductRing,
        src_index: Vec<usize>,
        maps: Vec<CompRingMap>,
    ) -> Result<Self> {
        if src_index.len() != tgt.len() || maps.len() != tgt.len() {
            return Err(Error::Construction(
                "ring map has the wrong number of components".into(),
            ));
        }
        for (j, (&i, m)) in src_index.iter().zip(&maps).enumerate() {
            if i >= src.len() || m.src() != src.component(i) || m.tgt() != tgt.component(j) {
                return Err(Error::Construction(format!(
                    "ring map component {j} has mismatched rings"
                )));
            }
        }
        Ok(RingMap {
            src_len: src.len(),
            src_index,
            maps,
        })
    }

    pub fn identity(r: &ProductRing) -> Self {
        RingMap {
            src_len: r.len(),
            src_index: (0..r.len()).collect(),
            maps: r.components().iter().map(CompRingMap::identity).collect(),
        }
    }

    /// Componentwise localization, when `tgt` localizes `src` component by component.
    pub fn localization(src: &ProductRing, tgt: &ProductRing) -> Result<Self> {
        if src.len() != tgt.len() {
            return Err(Error::Construction(
                "localization changes the component count".into(),
            ));
        }
        let maps = src
            .components()
            .iter()
            .zip(tgt.components())
            .map(|(a, b)| CompRingMap::localization(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingMap {
            src_len: src.len(),
            src_index: (0..src.len()).collect(),
            maps,
        })
    }

    /// The same variable images between localizations of the source and
    /// target; fails when an inverted element is not sent to a unit.
    pub fn relocalize(&self, src: &ProductRing, tgt: &ProductRing) -> Result<RingMap> {
        if src.len() != self.src_len || tgt.len() != self.maps.len() {
            return Err(Error::Construction(
                "relocalizing onto products of another shape".into(),
            ));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                CompRingMap::new(
                    src.component(self.src_index[j]),
                    tgt.component(j),
                    m.images().to_vec(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RingMap {
            src_len: self.src_len,
            src_index: self.src_index.clone(),
            maps,
        })
    }

    pub fn src_len(&self) -> usize {
        self.src_len
    }

    pub fn tgt_len(&self) -> usize {
        self.maps.len()
    }

    pub fn src_index(&self) -> &[usize] {
        &self.src_index
    }

    pub fn src_of(&self, j: usize) -> usize {
        self.src_index[j]
    }

    pub fn component(&self, j: usize) -> &CompRingMap {
        &self.maps[j]
    }

    pub fn maps(&self) -> &[CompRingMap] {
        &self.maps
    }

    pub fn is_identity(&self) -> bool {
        self.src_len == self.maps.len()
            && self.src_index.iter().enumerate().all(|(j, &i)| i == j)
            && self.maps.iter().all(|m| m.is_identity())
    }

    pub fn apply(&self, x: &RingElem) -> RingElem {
        assert_eq!(x.len(), self.src_len);
        self.maps
            .iter()
            .zip(&self.src_index)
            .map(|(m, &i)| m.apply(&x[i]))
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        if other.src_len != self.maps.len() {
            return Err(Error::Construction(
                "composing ring maps with mismatched products".into(),
            ));
        }
        let mut src_index = Vec::with_capacity(other.maps.len());
        let mut maps = Vec::with_capacity(other.maps.len());
        for (k, m2) in other.maps.iter().enumerate() {
            let j = other.src_index[k];
            src_index.push(self.src_index[j]);
            maps.push(self.maps[j].then(m2)?);
        }
        Ok(RingMap {
            src_len: self.src_len,
            src_index,
            maps,
        })
    }

    pub fn to_json(&self) -> RingMapJson {
        RingMapJson {
            src_len: self.src_len,
            src_index: self.src_index.clone(),
            maps: self.maps.iter().map(|m| m.to_json()).collect(),
        }
    }

    pub fn from_json(j: &RingMapJson) -> Result<Self> {
        let maps = j
            .maps
            .iter()
            .map(CompRingMap::from_json)
            .collect::<Result<Vec<_>>>()?;
        if maps.len() != j.src_index.len() || j.src_index.iter().any(|&i| i >= j.src_len) {
            return Err(Error::Construction("malformed ring map".into()));
        }
        Ok(RingMap {
            src_len: j.src_len,
            src_index: j.src_index.clone(),
            maps,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingMapJson {
    pub src_len: usize,
    pub src_index: Vec<usize>,
    pub maps: Vec<CompRingMapJson>,
}
