//! Modules over finite products of component rings.
//!
//! A module over `∏_j R_j` splits as `∏_j e_j M`, so a value is a list of
//! component modules. A map along a product ring map sends target component
//! `j` to a map out of source component `src(j)`.

use super::comp::{CompMap, CompModule, Elem};
use super::pieces::Window;
use crate::error::{Error, Result};
use crate::ring::{ProductRing, RingMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleValue {
    comps: Vec<CompModule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMap {
    comps: Vec<CompMap>,
}

/// An element of a product module, one homogeneous element per component.
pub type ValueElem = Vec<Elem>;

impl ModuleValue {
    pub fn new(ring: &ProductRing, comps: Vec<CompModule>) -> Result<Self> {
        if comps.len() != ring.len()
            || comps
                .iter()
                .zip(ring.components())
                .any(|(m, r)| m.ring() != r)
        {
            return Err(Error::Construction(
                "module components do not match the ring".into(),
            ));
        }
        Ok(ModuleValue { comps })
    }

    pub fn zero(ring: &ProductRing) -> Self {
        ModuleValue {
            comps: ring
                .components()
                .iter()
                .map(|r| CompModule::zero(r.clone()))
                .collect(),
        }
    }

    /// The free module on generators of the given degrees in every component.
    pub fn free(ring: &ProductRing, degrees: &[i64]) -> Self {
        ModuleValue {
            comps: ring
                .components()
                .iter()
                .map(|r| CompModule::free(r.clone(), degrees.to_vec()))
                .collect(),
        }
    }

    pub fn components(&self) -> &[CompModule] {
        &self.comps
    }

    pub fn component(&self, j: usize) -> &CompModule {
        &self.comps[j]
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    pub fn concat(parts: &[&ModuleValue]) -> ModuleValue {
        ModuleValue {
            comps: parts.iter().flat_map(|p| p.comps.iter().cloned()).collect(),
        }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.comps.iter().map(|m| m.describe()).collect();
        parts.join(" × ")
    }
}

impl ModMap {
    pub fn new(comps: Vec<CompMap>) -> Self {
        ModMap { comps }
    }

    pub fn components(&self) -> &[CompMap] {
        &self.comps
    }

    pub fn component(&self, j: usize) -> &CompMap {
        &self.comps[j]
    }

    pub fn into_components(self) -> Vec<CompMap> {
        self.comps
    }

    pub fn identity(m: &ModuleValue, w: Window) -> Result<Self> {
        Ok(ModMap {
            comps: m
                .comps
                .iter()
                .map(|c| CompMap::identity(c, w))
                .collect::<Result<_>>()?,
        })
    }

    pub fn zero(src: &ModuleValue, tgt: &ModuleValue, phi: &RingMap, w: Window) -> Result<Self> {
        let comps = (0..tgt.len())
            .map(|j| CompMap::zero(src.component(phi.src_of(j)), tgt.component(j), w))
            .collect::<Result<_>>()?;
        Ok(ModMap { comps })
    }

    pub fn check(
        &self,
        src: &ModuleValue,
        tgt: &ModuleValue,
        phi: &RingMap,
        w: Window,
    ) -> Result<()> {
        if self.comps.len() != tgt.len() || phi.tgt_len() != tgt.len() || phi.src_len() != src.len()
        {
            return Err(Error::Construction(
                "module map has the wrong number of components".into(),
            ));
        }
        for (j, f) in self.comps.iter().enumerate() {
            f.check(
                src.component(phi.src_of(j)),
                tgt.component(j),
                phi.component(j),
                w,
            )?;
        }
        Ok(())
    }

    pub fn apply(
        &self,
        src: &ModuleValue,
        tgt: &ModuleValue,
        phi: &RingMap,
        w: Window,
        x: &ValueElem,
        deg: i64,
    ) -> Result<ValueElem> {
        (0..tgt.len())
            .map(|j| {
                let i = phi.src_of(j);
                self.comps[j].apply(
                    src.component(i),
                    tgt.component(j),
                    phi.component(j),
                    w,
                    &x[i],
                    deg,
                )
            })
            .collect()
    }

    /// `g ∘ self` for `self: a → b` along `phi` and `g: b → c` along `psi`.
    #[allow(clippy::too_many_arguments)]
    pub fn then(
        &self,
        g: &ModMap,
        a: &ModuleValue,
        b: &ModuleValue,
        c: &ModuleValue,
        phi: &RingMap,
        psi: &RingMap,
        w: Window,
    ) -> Result<ModMap> {
        let comps = (0..c.len())
            .map(|k| {
                let j = psi.src_of(k);
                let i = phi.src_of(j);
                self.comps[j].then(
                    &g.comps[k],
                    a.component(i),
                    b.component(j),
                    c.component(k),
                    psi.component(k),
                    w,
                )
            })
            .collect::<Result<_>>()?;
        Ok(ModMap { comps })
    }

    pub fn equals(
        &self,
        other: &ModMap,
        src: &ModuleValue,
        tgt: &ModuleValue,
        phi: &RingMap,
        w: Window,
    ) -> Result<bool> {
        for j in 0..tgt.len() {
            let i = phi.src_of(j);
            if !self.comps[j].equals(
                &other.comps[j],
                src.component(i),
                tgt.component(j),
                phi.component(j),
                w,
            )? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For maps over an identity ring map: `None` when every component is
    /// an isomorphism.
    pub fn iso_defect(
        &self,
        src: &ModuleValue,
        tgt: &ModuleValue,
        w: Window,
    ) -> Result<Option<String>> {
        for (j, f) in self.comps.iter().enumerate() {
            if let Some(d) = f.iso_defect(src.component(j), tgt.component(j), w)? {
                return Ok(Some(format!("component {j}: {d}")));
            }
        }
        Ok(None)
    }

    pub fn inverse(&self, src: &ModuleValue, tgt: &ModuleValue, w: Window) -> Result<ModMap> {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(j, f)| f.inverse(src.component(j), tgt.component(j), w))
            .collect::<Result<_>>()?;
        Ok(ModMap { comps })
    }
}
