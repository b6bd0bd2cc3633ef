use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::ring::RingDiagram;
use crate::error::{construction, precondition, Error, Result};
use crate::modules::{CompMap, ModMap, ModuleValue, Window};
use crate::ring::RingMap;

/// A module over a ring diagram: a value `M(a)` over `R(a)` for every object
/// and a map `M(a) → M(b)` along `R(a) → R(b)` for every relation.
#[derive(Clone, Debug)]
pub struct ModuleDiagram {
    ring: Arc<RingDiagram>,
    window: Window,
    values: Vec<ModuleValue>,
    maps: BTreeMap<(usize, usize), ModMap>,
}

impl ModuleDiagram {
    /// From maps on every strict relation; identities are filled in.
    pub fn new(
        ring: Arc<RingDiagram>,
        window: Window,
        values: Vec<ModuleValue>,
        mut maps: BTreeMap<(usize, usize), ModMap>,
    ) -> Result<Self> {
        if values.len() != ring.len() {
            return construction("one module value per index object is required");
        }
        for (i, v) in values.iter().enumerate() {
            ModuleValue::new(ring.ring(i), v.components().to_vec()).map_err(|_| {
                Error::Construction(format!(
                    "value at {} is over the wrong ring",
                    ring.index().label(i)
                ))
            })?;
        }
        let index = ring.index().clone();
        for (a, b) in index.relations() {
            if a == b {
                maps.insert((a, a), ModMap::identity(&values[a], window)?);
                continue;
            }
            let m = maps.get(&(a, b)).ok_or_else(|| {
                Error::Construction(format!(
                    "no module map {} → {}",
                    index.label(a),
                    index.label(b)
                ))
            })?;
            m.check(&values[a], &values[b], ring.map(a, b), window)
                .map_err(|e| {
                    Error::Construction(format!(
                        "module map {} → {}: {e}",
                        index.label(a),
                        index.label(b)
                    ))
                })?;
        }
        let d = ModuleDiagram {
            ring,
            window,
            values,
            maps,
        };
        d.check_functoriality()?;
        Ok(d)
    }

    /// From maps on generating arrows, composed along paths; functoriality
    /// then certifies that the choice of path does not matter.
    pub fn from_generators(
        ring: Arc<RingDiagram>,
        window: Window,
        values: Vec<ModuleValue>,
        gens: BTreeMap<(usize, usize), ModMap>,
    ) -> Result<Self> {
        let index = ring.index().clone();
        let n = index.len();
        let mut out: BTreeMap<(usize, usize), ModMap> = BTreeMap::new();
        for a in 0..n {
            // breadth-first over generators from `a`
            let mut reached: BTreeMap<usize, ModMap> = BTreeMap::new();
            reached.insert(a, ModMap::identity(&values[a], window)?);
            let mut queue = VecDeque::from([a]);
            while let Some(b) = queue.pop_front() {
                for (&(x, c), g) in gens.range((b, 0)..(b + 1, 0)) {
                    debug_assert_eq!(x, b);
                    if reached.contains_key(&c) {
                        continue;
                    }
                    let f = &reached[&b];
                    let comp = f.then(
                        g,
                        &values[a],
                        &values[b],
                        &values[c],
                        ring.map(a, b),
                        ring.map(b, c),
                        window,
                    )?;
                    reached.insert(c, comp);
                    queue.push_back(c);
                }
            }
            for b in 0..n {
                if a != b && index.leq(a, b) {
                    let m = reached.remove(&b).ok_or_else(|| {
                        Error::Construction(format!(
                            "{} → {} is not a composite of generators",
                            index.label(a),
                            index.label(b)
                        ))
                    })?;
                    out.insert((a, b), m);
                }
            }
        }
        ModuleDiagram::new(ring, window, values, out)
    }

    /// The ring diagram as a module over itself.
    pub fn ring_module(ring: Arc<RingDiagram>, window: Window) -> Result<Self> {
        let values: Vec<ModuleValue> = ring
            .rings()
            .iter()
            .map(|r| ModuleValue::free(r, &[0]))
            .collect();
        let mut maps = BTreeMap::new();
        for (&(a, b), phi) in ring.maps() {
            if a == b {
                continue;
            }
            let comps = (0..phi.tgt_len())
                .map(|j| CompMap::Basis(vec![values[b].component(j).basis_elem(0)]))
                .collect();
            maps.insert((a, b), ModMap::new(comps));
        }
        ModuleDiagram::new(ring, window, values, maps)
    }

    pub fn zero(ring: Arc<RingDiagram>, window: Window) -> Result<Self> {
        let values: Vec<ModuleValue> = ring.rings().iter().map(ModuleValue::zero).collect();
        let mut maps = BTreeMap::new();
        for (&(a, b), phi) in ring.maps() {
            if a != b {
                maps.insert((a, b), ModMap::zero(&values[a], &values[b], phi, window)?);
            }
        }
        ModuleDiagram::new(ring, window, values, maps)
    }

    pub fn ring(&self) -> &Arc<RingDiagram> {
        &self.ring
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &ModuleValue {
        &self.values[i]
    }

    pub fn values(&self) -> &[ModuleValue] {
        &self.values
    }

    pub fn map(&self, a: usize, b: usize) -> &ModMap {
        self.maps.get(&(a, b)).unwrap_or_else(|| {
            panic!(
                "{} ≰ {}",
                self.ring.index().label(a),
                self.ring.index().label(b)
            )
        })
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), ModMap> {
        &self.maps
    }

    pub fn label(&self, i: usize) -> String {
        self.ring.index().label(i)
    }

    pub fn check_functoriality(&self) -> Result<()> {
        let idx = self.ring.index();
        let n = self.len();
        let w = self.window;
        for a in 0..n {
            for b in 0..n {
                if a == b || !idx.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c == b || !idx.leq(b, c) {
                        continue;
                    }
                    let (ra, rb) = (self.ring.map(a, b), self.ring.map(b, c));
                    let comp = self.maps[&(a, b)].then(
                        &self.maps[&(b, c)],
                        &self.values[a],
                        &self.values[b],
                        &self.values[c],
                        ra,
                        rb,
                        w,
                    )?;
                    if !comp.equals(
                        &self.maps[&(a, c)],
                        &self.values[a],
                        &self.values[c],
                        self.ring.map(a, c),
                        w,
                    )? {
                        return construction(format!(
                            "module maps not functorial along {} → {} → {}",
                            idx.label(a),
                            idx.label(b),
                            idx.label(c)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every value is zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// A natural transformation between modules over the same ring diagram.
#[derive(Clone, Debug)]
pub struct DiagramMorphism {
    comps: Vec<ModMap>,
}

impl DiagramMorphism {
    pub fn new(src: &ModuleDiagram, tgt: &ModuleDiagram, comps: Vec<ModMap>) -> Result<Self> {
        same_ring(src, tgt)?;
        if comps.len() != src.len() {
            return construction("one component per index object is required");
        }
        let w = src.window;
        for (i, c) in comps.iter().enumerate() {
            c.check(
                src.value(i),
                tgt.value(i),
                &RingMap::identity(src.ring.ring(i)),
                w,
            )?;
        }
        let m = DiagramMorphism { comps };
        if let Some(d) = m.naturality_defect(src, tgt)? {
            return construction(d);
        }
        Ok(m)
    }

    pub fn identity(m: &ModuleDiagram) -> Result<Self> {
        Ok(DiagramMorphism {
            comps: m
                .values
                .iter()
                .map(|v| ModMap::identity(v, m.window))
                .collect::<Result<_>>()?,
        })
    }

    pub fn components(&self) -> &[ModMap] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &ModMap {
        &self.comps[i]
    }

    pub fn naturality_defect(
        &self,
        src: &ModuleDiagram,
        tgt: &ModuleDiagram,
    ) -> Result<Option<String>> {
        let w = src.window;
        let ring = &src.ring;
        for (&(a, b), phi) in ring.maps() {
            if a == b {
                continue;
            }
            let ida = RingMap::identity(ring.ring(a));
            let idb = RingMap::identity(ring.ring(b));
            let top = self.comps[a].then(
                tgt.map(a, b),
                src.value(a),
                tgt.value(a),
                tgt.value(b),
                &ida,
                phi,
                w,
            )?;
            let bottom = src.map(a, b).then(
                &self.comps[b],
                src.value(a),
                src.value(b),
                tgt.value(b),
                phi,
                &idb,
                w,
            )?;
            if !top.equals(&bottom, src.value(a), tgt.value(b), phi, w)? {
                return Ok(Some(format!(
                    "not natural on {} → {}",
                    src.label(a),
                    src.label(b)
                )));
            }
        }
        Ok(None)
    }

    /// `g ∘ self`.
    pub fn then(
        &self,
        g: &DiagramMorphism,
        a: &ModuleDiagram,
        b: &ModuleDiagram,
        c: &ModuleDiagram,
    ) -> Result<Self> {
        same_ring(a, b)?;
        same_ring(b, c)?;
        let w = a.window;
        let comps = (0..a.len())
            .map(|i| {
                let id = RingMap::identity(a.ring.ring(i));
                self.comps[i].then(&g.comps[i], a.value(i), b.value(i), c.value(i), &id, &id, w)
            })
            .collect::<Result<_>>()?;
        Ok(DiagramMorphism { comps })
    }

    pub fn equals(
        &self,
        other: &DiagramMorphism,
        src: &ModuleDiagram,
        tgt: &ModuleDiagram,
    ) -> Result<bool> {
        for i in 0..src.len() {
            let id = RingMap::identity(src.ring.ring(i));
            if !self.comps[i].equals(
                &other.comps[i],
                src.value(i),
                tgt.value(i),
                &id,
                src.window,
            )? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self, m: &ModuleDiagram) -> Result<bool> {
        self.equals(&DiagramMorphism::identity(m)?, m, m)
    }

    /// The first object where the component fails to be an isomorphism.
    pub fn iso_defect(&self, src: &ModuleDiagram, tgt: &ModuleDiagram) -> Result<Option<String>> {
        for i in 0..src.len() {
            if let Some(d) = self.comps[i].iso_defect(src.value(i), tgt.value(i), src.window)? {
                return Ok(Some(format!("at {}: {d}", src.label(i))));
            }
        }
        Ok(None)
    }

    pub fn inverse(&self, src: &ModuleDiagram, tgt: &ModuleDiagram) -> Result<Self> {
        let comps = (0..src.len())
            .map(|i| self.comps[i].inverse(src.value(i), tgt.value(i), src.window))
            .collect::<Result<_>>()?;
        Ok(DiagramMorphism { comps })
    }
}

fn same_ring(a: &ModuleDiagram, b: &ModuleDiagram) -> Result<()> {
    if !a.ring.same_as(&b.ring) {
        return precondition("modules over different ring diagrams");
    }
    if a.window != b.window {
        return precondition("modules on different windows");
    }
    Ok(())
}
