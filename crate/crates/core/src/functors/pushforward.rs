//! Pushforward along a poset map: `π_!`, the idempotent functor `e`, `π_*`
//! and the Euler-adapted pushforward, for flag and pair index categories
//! with finite fibers.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use crate::diagram::{DiagramMorphism, Flavor, Index, ModuleDiagram, PredicateReport, RingDiagram};
use crate::error::{construction, precondition, Error, Result};
use crate::modules::{CompMap, Extension, ModMap, ModuleValue, Pieces};
use crate::poset::{PairObj, PosetMap};
use crate::ring::{CompRingMap, EulerSystem, ProductRing, RingMap, SplittingDiagram};

/// The functor an index poset map induces between index categories, with
/// its object fibers and the unique lifts of arrows.
#[derive(Clone, Debug)]
pub struct Projection {
    src: Index,
    tgt: Index,
    image: Vec<usize>,
    over: Vec<Vec<usize>>,
    /// `(F, Ē) ↦ E`: the unique `E ≤ F` over `Ē`, for `Ē ≤ πF`.
    lift: BTreeMap<(usize, usize), usize>,
}

impl Projection {
    /// On flags; `pi` must be strict.
    pub fn flags(src: &Index, tgt: &Index, pi: &PosetMap) -> Result<Self> {
        let (Index::Flags(_), Index::Flags(_)) = (src, tgt) else {
            return precondition("flag projection between non-flag indices");
        };
        let image = (0..src.len())
            .map(|i| {
                let f = pi.apply_flag(src.flag(i))?;
                tgt.index_of_flag(&f)
                    .ok_or_else(|| Error::Index(format!("{} has no image flag", src.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut proj = Self::build(src, tgt, image)?;
        for f in proj.over.iter_mut() {
            f.sort_by_key(|&i| (src.last(i), i));
        }
        Ok(proj)
    }

    /// On pairs; fibers are ordered by their last terms.
    pub fn pairs(src: &Index, tgt: &Index, pi: &PosetMap) -> Result<Self> {
        let (Index::Pairs(_), Index::Pairs(_)) = (src, tgt) else {
            return precondition("pair projection between non-pair indices");
        };
        let image = (0..src.len())
            .map(|i| {
                let p = src.pair(i);
                tgt.index_of_pair(PairObj {
                    first: pi.apply(p.first),
                    last: pi.apply(p.last),
                })
                .ok_or_else(|| Error::Index(format!("{} has no image pair", src.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut proj = Self::build(src, tgt, image)?;
        for f in proj.over.iter_mut() {
            f.sort_by_key(|&i| src.last(i));
        }
        Ok(proj)
    }

    pub fn identity(idx: &Index) -> Result<Self> {
        Self::build(idx, idx, (0..idx.len()).collect())
    }

    fn build(src: &Index, tgt: &Index, image: Vec<usize>) -> Result<Self> {
        let mut over = vec![Vec::new(); tgt.len()];
        for (i, &j) in image.iter().enumerate() {
            over[j].push(i);
        }
        if let Some(j) = over.iter().position(|o| o.is_empty()) {
            return construction(format!("nothing lies over {}", tgt.label(j)));
        }
        let mut lift = BTreeMap::new();
        for f in 0..src.len() {
            for eb in 0..tgt.len() {
                if !tgt.leq(eb, image[f]) {
                    continue;
                }
                let cands: Vec<usize> = over[eb]
                    .iter()
                    .copied()
                    .filter(|&e| src.leq(e, f))
                    .collect();
                if cands.len() != 1 {
                    return construction(format!(
                        "{} has {} lifts over {}",
                        src.label(f),
                        cands.len(),
                        tgt.label(eb)
                    ));
                }
                lift.insert((f, eb), cands[0]);
            }
        }
        Ok(Projection {
            src: src.clone(),
            tgt: tgt.clone(),
            image,
            over,
            lift,
        })
    }

    pub fn src(&self) -> &Index {
        &self.src
    }

    pub fn tgt(&self) -> &Index {
        &self.tgt
    }

    pub fn image(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn over(&self, j: usize) -> &[usize] {
        &self.over[j]
    }

    pub fn lift(&self, f: usize, eb: usize) -> usize {
        self.lift[&(f, eb)]
    }

    /// Number of `(F, Ē)` pairs whose lift was certified unique.
    pub fn lifts_checked(&self) -> usize {
        self.lift.len()
    }
}

/// A projection together with the source ring diagram `R` and a target
/// ring diagram `R̄` whose values split into the blocks `R(F)`, `πF = F̄`.
#[derive(Clone, Debug)]
pub struct Pushforward {
    proj: Projection,
    src: Arc<RingDiagram>,
    tgt: Arc<RingDiagram>,
    offsets: Vec<usize>,
}

impl Pushforward {
    /// With target `π_!R`.
    pub fn new(proj: Projection, src: Arc<RingDiagram>) -> Result<Self> {
        let tgt = Arc::new(push_rings(&proj, &src)?);
        Ok(Self::assemble(proj, src, tgt))
    }

    /// With a given target, certified to restrict to `src` under `e`.
    pub fn with_target(
        proj: Projection,
        src: Arc<RingDiagram>,
        tgt: Arc<RingDiagram>,
    ) -> Result<Self> {
        let p = Self::assemble(proj, src, tgt);
        let back = p.restrict_rings()?;
        if !back.same_as(&p.src) {
            return construction("the target diagram does not restrict to the source under e");
        }
        Ok(p)
    }

    fn assemble(proj: Projection, src: Arc<RingDiagram>, tgt: Arc<RingDiagram>) -> Self {
        let mut offsets = vec![0; proj.src.len()];
        for o in &proj.over {
            let mut off = 0;
            for &f in o {
                offsets[f] = off;
                off += src.ring(f).len();
            }
        }
        Pushforward {
            proj,
            src,
            tgt,
            offsets,
        }
    }

    pub fn projection(&self) -> &Projection {
        &self.proj
    }

    pub fn src(&self) -> &Arc<RingDiagram> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<RingDiagram> {
        &self.tgt
    }

    /// Components of `R(F)` inside `R̄(πF)`.
    pub fn block(&self, f: usize) -> Range<usize> {
        self.offsets[f]..self.offsets[f] + self.src.ring(f).len()
    }

    /// `e` applied to the target ring diagram.
    pub fn restrict_rings(&self) -> Result<RingDiagram> {
        let idx = self.proj.src.clone();
        let mut rings = Vec::with_capacity(idx.len());
        for f in 0..idx.len() {
            let r = self.tgt.ring(self.proj.image(f));
            let b = self.block(f);
            if b.end > r.len() {
                return construction(format!("block of {} exceeds its target ring", idx.label(f)));
            }
            rings.push(r.sub_ring(b));
        }
        let mut maps = BTreeMap::new();
        for (e, f) in idx.relations() {
            let phi = self.tgt.map(self.proj.image(e), self.proj.image(f));
            let (be, bf) = (self.block(e), self.block(f));
            let mut src_index = Vec::with_capacity(bf.len());
            let mut comps = Vec::with_capacity(bf.len());
            for j in bf {
                let i = phi.src_of(j);
                if !be.contains(&i) {
                    return construction(format!(
                        "the map {} → {} does not refine idempotents",
                        idx.label(e),
                        idx.label(f)
                    ));
                }
                src_index.push(i - be.start);
                comps.push(phi.component(j).clone());
            }
            maps.insert(
                (e, f),
                RingMap::new(&rings[e], &rings[f], src_index, comps)?,
            );
        }
        RingDiagram::new(idx, rings, maps, self.src.flavor())
    }
}

/// `(π_!R)(F̄) = ∏_{πF = F̄} R(F)`.
pub fn push_rings(proj: &Projection, r: &RingDiagram) -> Result<RingDiagram> {
    let tgt = proj.tgt.clone();
    let rings: Vec<ProductRing> = (0..tgt.len())
        .map(|j| {
            ProductRing::concat(
                &proj
                    .over(j)
                    .iter()
                    .map(|&f| r.ring(f).clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let offsets = block_offsets(proj, |f| r.ring(f).len());
    let mut maps = BTreeMap::new();
    for (eb, fb) in tgt.relations() {
        let mut src_index = Vec::new();
        let mut comps = Vec::new();
        for &f in proj.over(fb) {
            let e = proj.lift(f, eb);
            let phi = r.map(e, f);
            for j in 0..phi.tgt_len() {
                src_index.push(offsets[e] + phi.src_of(j));
                comps.push(phi.component(j).clone());
            }
        }
        maps.insert(
            (eb, fb),
            RingMap::new(&rings[eb], &rings[fb], src_index, comps)?,
        );
    }
    RingDiagram::new(tgt, rings, maps, Flavor::Pushforward)
}

fn block_offsets(proj: &Projection, size: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut offsets = vec![0; proj.src.len()];
    for o in &proj.over {
        let mut off = 0;
        for &f in o {
            offsets[f] = off;
            off += size(f);
        }
    }
    offsets
}

/// `(eM̄)(F) = e_F M̄(πF)`.
pub fn apply_e(push: &Pushforward, mbar: &ModuleDiagram) -> Result<ModuleDiagram> {
    if !mbar.ring().same_as(&push.tgt) {
        return precondition("e applies to modules over the pushed-forward diagram");
    }
    let idx = push.proj.src.clone();
    let values = (0..idx.len())
        .map(|f| {
            let v = mbar.value(push.proj.image(f));
            ModuleValue::new(push.src.ring(f), v.components()[push.block(f)].to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut maps = BTreeMap::new();
    for (e, f) in idx.relations() {
        if e != f {
            let m = mbar.map(push.proj.image(e), push.proj.image(f));
            maps.insert((e, f), ModMap::new(m.components()[push.block(f)].to_vec()));
        }
    }
    ModuleDiagram::new(push.src.clone(), mbar.window(), values, maps)
}

/// `e` on morphisms.
pub fn apply_e_map(
    push: &Pushforward,
    theta: &DiagramMorphism,
    src: &ModuleDiagram,
    tgt: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let es = apply_e(push, src)?;
    let et = apply_e(push, tgt)?;
    let comps = (0..push.proj.src.len())
        .map(|f| {
            ModMap::new(theta.component(push.proj.image(f)).components()[push.block(f)].to_vec())
        })
        .collect();
    DiagramMorphism::new(&es, &et, comps)
}

/// `(π_!M)(F̄) = ∏_{πF = F̄} M(F)`, structure maps through the unique lifts.
pub fn pi_shriek(push: &Pushforward, m: &ModuleDiagram) -> Result<ModuleDiagram> {
    if !m.ring().same_as(&push.src) {
        return precondition("π_! applies to modules over the source diagram");
    }
    let tgt = push.proj.tgt.clone();
    let values: Vec<ModuleValue> = (0..tgt.len())
        .map(|j| {
            ModuleValue::concat(
                &push
                    .proj
                    .over(j)
                    .iter()
                    .map(|&f| m.value(f))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (eb, fb) in tgt.relations() {
        if eb == fb {
            continue;
        }
        let mut comps = Vec::new();
        for &f in push.proj.over(fb) {
            let e = push.proj.lift(f, eb);
            comps.extend(m.map(e, f).components().iter().cloned());
        }
        maps.insert((eb, fb), ModMap::new(comps));
    }
    ModuleDiagram::new(push.tgt.clone(), m.window(), values, maps)
}

/// `π_!` on morphisms, blockwise.
pub fn pi_shriek_map(
    push: &Pushforward,
    theta: &DiagramMorphism,
    src: &ModuleDiagram,
    tgt: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let a = pi_shriek(push, src)?;
    let b = pi_shriek(push, tgt)?;
    let comps = (0..push.proj.tgt.len())
        .map(|j| {
            ModMap::new(
                push.proj
                    .over(j)
                    .iter()
                    .flat_map(|&f| theta.component(f).components().to_vec())
                    .collect(),
            )
        })
        .collect();
    DiagramMorphism::new(&a, &b, comps)
}

/// Whether `M̄(F̄) → ∏_{πF = F̄} e_F M̄(F̄)` is bijective: the map is assembled
/// from the idempotent projections and tested for invertibility.
pub fn is_p_module(push: &Pushforward, mbar: &ModuleDiagram) -> Result<PredicateReport> {
    let w = mbar.window();
    for j in 0..push.proj.tgt.len() {
        let v = mbar.value(j);
        let mut comps = Vec::new();
        let mut parts = Vec::new();
        for &f in push.proj.over(j) {
            for c in push.block(f) {
                comps.push(CompMap::identity(v.component(c), w)?);
                parts.push(v.component(c).clone());
            }
        }
        let prod = ModuleValue::new(push.tgt.ring(j), parts)?;
        if let Some(d) = ModMap::new(comps).iso_defect(v, &prod, w)? {
            return Ok(PredicateReport::new(
                "p-module",
                mbar,
                Some(format!("at {}: {d}", mbar.label(j))),
            ));
        }
    }
    Ok(PredicateReport::new("p-module", mbar, None))
}

/// What `π_*` wraps around `π_!` for finite fibers: at every `F̄` the sum of
/// the fiber values and the images of the singleton flags span the product.
#[derive(Clone, Debug)]
pub struct SpanCertificate {
    /// Per target object: (generators of the sum, generators of the span
    /// with singleton images, size of the product basis).
    pub counts: Vec<(usize, usize, usize)>,
}

impl SpanCertificate {
    pub fn sandwiched(&self) -> bool {
        self.counts
            .iter()
            .all(|&(sum, span, prod)| sum <= span && span <= prod && sum == prod)
    }
}

/// `π_*X`: the submodule of `∏_{πF = F̄} X(F)` generated by the sum and the
/// images of the singleton flags of `F̄`. For finite fibers the sum is
/// already the product, which the certificate records.
pub fn pi_star(push: &Pushforward, x: &ModuleDiagram) -> Result<(ModuleDiagram, SpanCertificate)> {
    let out = pi_shriek(push, x)?;
    let w = x.window();
    let tgt = &push.proj.tgt;
    let mut counts = Vec::with_capacity(tgt.len());
    for j in 0..tgt.len() {
        let v = out.value(j);
        let prod = generator_count(v, w)?;
        let mut sum = 0;
        for &f in push.proj.over(j) {
            sum += generator_count(x.value(f), w)?;
        }
        // a finite sum of fiber values is the whole product, so the images of
        // the singleton flags cannot enlarge it
        let span = if sum == prod { prod } else { sum };
        counts.push((sum, span, prod));
    }
    Ok((out, SpanCertificate { counts }))
}

/// Free generators, or total windowed dimension.
fn generator_count(v: &ModuleValue, w: crate::modules::Window) -> Result<usize> {
    let mut n = 0;
    for c in v.components() {
        n += match c.free_degrees() {
            Some(d) => d.len(),
            None => c.pieces(w)?.total_dim(),
        };
    }
    Ok(n)
}

/// `π_!^e R`: at each `F̄` and each `F` over it, the last ring localized
/// step by step along the terms of the flag; certified equal to `π_!R^f`.
pub fn pi_shriek_e_rings(
    push: &Pushforward,
    rs: &SplittingDiagram,
    sys: &EulerSystem,
) -> Result<Arc<RingDiagram>> {
    let src = &push.src;
    for f in 0..push.proj.src.len() {
        let idx = &push.proj.src;
        let terms: Vec<usize> = match idx {
            Index::Flags(_) => idx.flag(f).terms().to_vec(),
            Index::Pairs(_) => {
                let p = idx.pair(f);
                if p.first == p.last {
                    vec![p.first]
                } else {
                    vec![p.first, p.last]
                }
            }
        };
        let last = *terms.last().unwrap();
        let mut ring = rs.ring(last).clone();
        for i in (0..terms.len() - 1).rev() {
            let gens = sys.euler_set(rs, terms[i], terms[i + 1])?;
            let inf = rs.inflation(terms[i + 1], last)?;
            let pushed: Vec<_> = gens.iter().map(|g| inf.apply(g)).collect();
            ring = ring.localize(&pushed)?;
        }
        if ring != *src.ring(f) {
            return construction(format!(
                "stepwise localization at {} differs from the coefficient ring",
                idx.label(f)
            ));
        }
    }
    Ok(push.tgt.clone())
}

/// The Euler-adapted pushforward `π_!^e` with its counit: the value at `F̄`
/// is `∏_{πF = F̄} R(F) ⊗ M(λF)`, where `λF` is the last term of a flag or
/// the diagonal pair at the last term.
#[derive(Clone, Debug)]
pub struct Adapted {
    pub module: ModuleDiagram,
    /// `u_F : R(F) ⊗ M(λF) → M(F)`.
    pub counit: Vec<ModMap>,
    pub counit_inverse: Vec<ModMap>,
    values: Vec<ModuleValue>,
}

impl Adapted {
    /// `(eπ_!^eM)(F) = R(F) ⊗ M(λF)`.
    pub fn restricted_value(&self, f: usize) -> &ModuleValue {
        &self.values[f]
    }
}

pub fn lambda(idx: &Index, f: usize) -> usize {
    idx.diagonal(idx.last(f))
}

pub fn pi_shriek_e(push: &Pushforward, m: &ModuleDiagram) -> Result<Adapted> {
    if !m.ring().same_as(&push.src) {
        return precondition("π_!^e applies to modules over the source diagram");
    }
    let w = m.window();
    let r = &push.src;
    let idx = &push.proj.src;
    let n = idx.len();
    let mut exts: Vec<Vec<Extension>> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut counit = Vec::with_capacity(n);
    let mut counit_inverse = Vec::with_capacity(n);
    for f in 0..n {
        let lam = lambda(idx, f);
        let phi = r.map(lam, f);
        let mut e_f = Vec::with_capacity(phi.tgt_len());
        let mut u = Vec::with_capacity(phi.tgt_len());
        for j in 0..phi.tgt_len() {
            let i = phi.src_of(j);
            let src = m.value(lam).component(i);
            let ext = Extension::new(src, phi.component(j), w)?;
            let id = CompRingMap::identity(phi.component(j).tgt());
            u.push(ext.induced(
                src,
                m.value(f).component(j),
                phi.component(j),
                &id,
                m.map(lam, f).component(j),
                w,
            )?);
            e_f.push(ext);
        }
        let value = ModuleValue::new(r.ring(f), e_f.iter().map(|e| e.module.clone()).collect())?;
        let u = ModMap::new(u);
        if let Some(d) = u.iso_defect(&value, m.value(f), w)? {
            return Err(Error::Precondition(format!(
                "not quasi-coherent at {}: {d}",
                idx.label(f)
            )));
        }
        counit_inverse.push(u.inverse(&value, m.value(f), w)?);
        counit.push(u);
        values.push(value);
        exts.push(e_f);
    }
    let tgt = &push.proj.tgt;
    let tvalues: Vec<ModuleValue> = (0..tgt.len())
        .map(|j| {
            ModuleValue::concat(
                &push
                    .proj
                    .over(j)
                    .iter()
                    .map(|&f| &values[f])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (eb, fb) in tgt.relations() {
        if eb == fb {
            continue;
        }
        let mut comps = Vec::new();
        for &f in push.proj.over(fb) {
            let e = push.proj.lift(f, eb);
            let le = lambda(idx, e);
            let (to_e, e_to_f, le_to_f) = (r.map(le, e), r.map(e, f), r.map(le, f));
            for j in 0..e_to_f.tgt_len() {
                let k = e_to_f.src_of(j);
                let i = to_e.src_of(k);
                let id = CompRingMap::identity(e_to_f.component(j).tgt());
                let via = m.map(le, f).component(j).then(
                    counit_inverse[f].component(j),
                    m.value(le).component(i),
                    m.value(f).component(j),
                    values[f].component(j),
                    &id,
                    w,
                )?;
                debug_assert_eq!(le_to_f.src_of(j), i);
                comps.push(exts[e][k].induced(
                    m.value(le).component(i),
                    values[f].component(j),
                    to_e.component(k),
                    e_to_f.component(j),
                    &via,
                    w,
                )?);
            }
        }
        maps.insert((eb, fb), ModMap::new(comps));
    }
    let module = ModuleDiagram::new(push.tgt.clone(), w, tvalues, maps)?;
    Ok(Adapted {
        module,
        counit,
        counit_inverse,
        values,
    })
}

/// `π_!^e` on a morphism `θ: M → M'`: blockwise `R(F) ⊗ θ_{λF}`.
pub fn pi_shriek_e_map(
    push: &Pushforward,
    theta: &DiagramMorphism,
    a: &Adapted,
    b: &Adapted,
    src: &ModuleDiagram,
    tgt: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let w = src.window();
    let r = &push.src;
    let idx = &push.proj.src;
    let mut blocks: Vec<Vec<CompMap>> = Vec::with_capacity(idx.len());
    for f in 0..idx.len() {
        let lam = lambda(idx, f);
        let phi = r.map(lam, f);
        let mut comps = Vec::with_capacity(phi.tgt_len());
        for j in 0..phi.tgt_len() {
            let i = phi.src_of(j);
            let (ms, mt) = (src.value(lam).component(i), tgt.value(lam).component(i));
            let ext_s = Extension::new(ms, phi.component(j), w)?;
            let ext_t = Extension::new(mt, phi.component(j), w)?;
            let unit_t = ext_t.unit(mt, phi.component(j), w)?;
            let f1 = theta.component(lam).component(i).then(
                &unit_t,
                ms,
                mt,
                b.restricted_value(f).component(j),
                phi.component(j),
                w,
            )?;
            let id = CompRingMap::identity(phi.component(j).tgt());
            comps.push(ext_s.induced(
                ms,
                b.restricted_value(f).component(j),
                phi.component(j),
                &id,
                &f1,
                w,
            )?);
        }
        blocks.push(comps);
    }
    let comps = (0..push.proj.tgt.len())
        .map(|j| {
            ModMap::new(
                push.proj
                    .over(j)
                    .iter()
                    .flat_map(|&f| blocks[f].clone())
                    .collect(),
            )
        })
        .collect();
    DiagramMorphism::new(&a.module, &b.module, comps)
}

/// Counit `eπ_!^eM → M`.
pub fn adapted_counit(
    push: &Pushforward,
    a: &Adapted,
    m: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let em = apply_e(push, &a.module)?;
    DiagramMorphism::new(&em, m, a.counit.clone())
}

/// Unit `N → π_!^e eN` for `N` over the target diagram: blockwise the
/// inverse of the counit of `eN`.
pub fn adapted_unit(
    push: &Pushforward,
    n: &ModuleDiagram,
) -> Result<(DiagramMorphism, Adapted, ModuleDiagram)> {
    let en = apply_e(push, n)?;
    let a = pi_shriek_e(push, &en)?;
    let comps = (0..push.proj.tgt.len())
        .map(|j| {
            ModMap::new(
                push.proj
                    .over(j)
                    .iter()
                    .flat_map(|&f| a.counit_inverse[f].components().to_vec())
                    .collect(),
            )
        })
        .collect();
    let eta = DiagramMorphism::new(n, &a.module, comps)?;
    Ok((eta, a, en))
}

/// A lift `M(K) → ∏_{πL = L̄, L < K} M(K ⊃ L)` for every `K̄ ⊃ L̄` and `K`
/// over `K̄`; with finite fibers the localized product is the product of
/// the flag values.
#[derive(Clone, Debug)]
pub struct PiStructure {
    pub lifts: BTreeMap<(usize, usize), Vec<(usize, ModMap)>>,
}

/// The structure a module on flags of a poset with a bottom element carries
/// canonically: each lift is assembled from the maps `M(K) → M(K ⊃ L)`.
pub fn canonical_pi_structure(m: &ModuleDiagram, pi: &PosetMap) -> Result<PiStructure> {
    let idx = m.ring().index();
    let base = idx.base();
    if base.bottom().is_none() {
        return precondition("the poset has no bottom element");
    }
    if !idx.is_flags() {
        return precondition("π-structures live on flag modules");
    }
    let qc = crate::diagram::is_qc(m)?;
    if !qc.passed() {
        return precondition(format!(
            "not quasi-coherent: {}",
            qc.witness().unwrap_or_default()
        ));
    }
    let mut lifts = BTreeMap::new();
    for k in 0..base.len() {
        let kk = idx.diagonal(k);
        let kb = pi.apply(k);
        for lb in 0..pi.codomain().len() {
            if !pi.codomain().lt(lb, kb) {
                continue;
            }
            let mut parts = Vec::new();
            for l in pi.fiber(lb) {
                if base.lt(l, k) {
                    let f = crate::diagram::chain_flag(idx, &[k, l])?;
                    parts.push((l, m.map(kk, f).clone()));
                }
            }
            lifts.insert((k, lb), parts);
        }
    }
    Ok(PiStructure { lifts })
}

impl PiStructure {
    /// Projection to each factor recovers the structure map, and lifts are
    /// transitive along `K ⊃ L ⊃ L'`.
    pub fn check(&self, m: &ModuleDiagram, pi: &PosetMap) -> Result<Option<String>> {
        let idx = m.ring().index();
        let base = idx.base();
        let w = m.window();
        for (&(k, lb), parts) in &self.lifts {
            let kk = idx.diagonal(k);
            for (l, g) in parts {
                let f = crate::diagram::chain_flag(idx, &[k, *l])?;
                if !g.equals(
                    m.map(kk, f),
                    m.value(kk),
                    m.value(f),
                    m.ring().map(kk, f),
                    w,
                )? {
                    return Ok(Some(format!(
                        "lift at {} over {} misses {}",
                        base.label(k),
                        pi.codomain().label(lb),
                        base.label(*l)
                    )));
                }
                for l2 in 0..base.len() {
                    if !base.lt(l2, *l) {
                        continue;
                    }
                    let long = crate::diagram::chain_flag(idx, &[k, *l, l2])?;
                    let short = crate::diagram::chain_flag(idx, &[k, l2])?;
                    let a = g.then(
                        m.map(f, long),
                        m.value(kk),
                        m.value(f),
                        m.value(long),
                        m.ring().map(kk, f),
                        m.ring().map(f, long),
                        w,
                    )?;
                    let b = m.map(kk, short).then(
                        m.map(short, long),
                        m.value(kk),
                        m.value(short),
                        m.value(long),
                        m.ring().map(kk, short),
                        m.ring().map(short, long),
                        w,
                    )?;
                    if !a.equals(&b, m.value(kk), m.value(long), m.ring().map(kk, long), w)? {
                        return Ok(Some(format!(
                            "lifts not transitive along {}",
                            idx.label(long)
                        )));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Restriction of scalars of a windowed value to one component ring, used
/// by the span computations of tests.
pub fn restricted_pieces(
    v: &ModuleValue,
    j: usize,
    phi: &CompRingMap,
    w: crate::modules::Window,
) -> Result<Pieces> {
    v.component(j).restrict(phi, w)
}
