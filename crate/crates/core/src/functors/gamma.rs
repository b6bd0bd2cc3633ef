//! The associated extended module `Γ_v M`, built node by node in order of
//! increasing codimension as pullbacks, with its map `λ: Γ_v M → M` and
//! the lifts witnessing its universal property.

use std::collections::BTreeMap;

use crate::diagram::{chain_flag, is_extended, DiagramMorphism, ModuleDiagram};
use crate::error::{precondition, Error, Result};
use crate::functors::{adapted_unit, pi_shriek_e, pi_shriek_e_map, Pushforward};
use crate::modules::{CompMap, CompModule, Elem, Extension, ModMap, ModuleValue, Pieces};
use crate::ring::{CompRingMap, QMatrix, Q};

/// `k^!M(K)` at every node with the maps out of it.
#[derive(Clone, Debug)]
pub struct NodeData {
    /// Over `R((K))`.
    pub value: ModuleValue,
    /// `k^!M(K) → M((K))`.
    pub to_m: ModMap,
    /// For `K' ⊃ K`: `R(K'⊃K) ⊗ k^!M(K')` per component, and the projection
    /// `k^!M(K) → R(K'⊃K) ⊗ k^!M(K')`.
    pub ext: BTreeMap<usize, (Vec<Extension>, ModuleValue, ModMap)>,
    /// Degreewise inclusion into `M((K)) ⊕ ⊕_{K'} R(K'⊃K) ⊗ k^!M(K')`, per
    /// component; empty at the top.
    pub incl: Vec<Vec<QMatrix>>,
}

/// `Γ_v M` with `λ` and the nodewise data.
#[derive(Clone, Debug)]
pub struct GammaV {
    pub module: ModuleDiagram,
    pub lambda: DiagramMorphism,
    pub nodes: Vec<NodeData>,
    /// `Γ_v M (F) = R(F) ⊗ k^!M(f(F))`, per component.
    pub exts: Vec<Vec<Extension>>,
}

fn check_graded(m: &ModuleDiagram) -> Result<()> {
    let idx = m.ring().index();
    if !idx.is_flags() {
        return precondition("Γ_v is built on flags");
    }
    let base = idx.base();
    for (a, b) in base.covers() {
        if base.codim(a) != base.codim(b) + 1 {
            return precondition(format!(
                "the poset is not graded by codimension at {} < {}",
                base.label(a),
                base.label(b)
            ));
        }
    }
    for (i, r) in m.ring().rings().iter().enumerate() {
        if let Some(c) = r.components().iter().find(|c| !c.is_finite_type()) {
            return Err(Error::Unsupported(format!(
                "pullbacks over {} at {} need windowed pieces",
                c.describe(),
                idx.label(i)
            )));
        }
    }
    Ok(())
}

fn neg(m: &QMatrix) -> QMatrix {
    m.scale(&Q::from_integer((-1).into()))
}

pub fn gamma_v(m: &ModuleDiagram) -> Result<GammaV> {
    check_graded(m)?;
    let w = m.window();
    let ring = m.ring();
    let idx = ring.index();
    let base = idx.base().clone();
    let mut order: Vec<usize> = (0..base.len()).collect();
    order.sort_by_key(|&k| (base.codim(k), k));
    let mut nodes: Vec<Option<NodeData>> = vec![None; base.len()];
    for &l in &order {
        let dl = idx.diagonal(l);
        let above: Vec<usize> = (0..base.len()).filter(|&k| base.lt(l, k)).collect();
        if above.is_empty() {
            nodes[l] = Some(NodeData {
                value: m.value(dl).clone(),
                to_m: ModMap::identity(m.value(dl), w)?,
                ext: BTreeMap::new(),
                incl: Vec::new(),
            });
            continue;
        }
        let rl = ring.ring(dl);
        // extensions R(K⊃L) ⊗ k^!M(K) and their maps to M(K⊃L)
        let mut per_k = Vec::with_capacity(above.len());
        for &k in &above {
            let nk = nodes[k].as_ref().expect("nodes above are built first");
            let dk = idx.diagonal(k);
            let kl = chain_flag(idx, &[k, l])?;
            let phi = ring.map(dk, kl);
            let mut exts = Vec::with_capacity(phi.tgt_len());
            let mut to_mkl = Vec::with_capacity(phi.tgt_len());
            for j in 0..phi.tgt_len() {
                let i = phi.src_of(j);
                let src = nk.value.component(i);
                let ext = Extension::new(src, phi.component(j), w)?;
                let f = nk.to_m.component(i).then(
                    m.map(dk, kl).component(j),
                    src,
                    m.value(dk).component(i),
                    m.value(kl).component(j),
                    phi.component(j),
                    w,
                )?;
                let id = CompRingMap::identity(phi.component(j).tgt());
                to_mkl.push(ext.induced(
                    src,
                    m.value(kl).component(j),
                    phi.component(j),
                    &id,
                    &f,
                    w,
                )?);
                exts.push(ext);
            }
            per_k.push((k, kl, exts, to_mkl));
        }
        let mut comps = Vec::with_capacity(rl.len());
        let mut to_m = Vec::with_capacity(rl.len());
        let mut sigma: Vec<Vec<CompMap>> = vec![Vec::new(); above.len()];
        let mut incl_all = Vec::with_capacity(rl.len());
        for j in 0..rl.len() {
            let rj = rl.component(j);
            let a = m.value(dl).component(j);
            let ap = a.pieces(w)?.into_owned();
            let mut parts: Vec<Pieces> = vec![ap.clone()];
            let mut top_rows: Vec<Vec<QMatrix>> = Vec::new();
            let mut diff_blocks: Vec<Vec<QMatrix>> = Vec::new();
            for (_, kl, exts, to_mkl) in &per_k {
                let loc = ring.map(dl, *kl);
                debug_assert_eq!(loc.src_of(j), j);
                let lj = loc.component(j);
                let b = &exts[j].module;
                let c = m.value(*kl).component(j);
                parts.push(b.restrict(lj, w)?);
                top_rows.push(m.map(dl, *kl).component(j).to_degreewise(a, c, lj, w)?);
                let id = CompRingMap::identity(lj.tgt());
                diff_blocks.push(to_mkl[j].to_degreewise(b, c, &id, w)?);
            }
            let refs: Vec<&Pieces> = parts.iter().collect();
            let sum = Pieces::direct_sum(rj, w, &refs);
            let map: Vec<QMatrix> = w
                .degrees()
                .map(|d| {
                    let i = w.index(d);
                    let blocks: Vec<QMatrix> = diff_blocks.iter().map(|g| neg(&g[i])).collect();
                    let right = QMatrix::block_diag(&blocks);
                    let mut col0 = QMatrix::zeros(0, ap.dim(d));
                    for t in &top_rows {
                        col0 = col0.vstack(&t[i]);
                    }
                    col0.hstack(&right)
                })
                .collect();
            let (ker, incl) = sum.kernel(rj, &map)?;
            let value = CompModule::from_pieces(rj.clone(), ker)?;
            // block offsets inside the sum, per degree
            let offs: Vec<Vec<usize>> = w
                .degrees()
                .map(|d| {
                    let mut o = vec![0];
                    for p in &parts {
                        o.push(o.last().unwrap() + p.dim(d));
                    }
                    o
                })
                .collect();
            let block = |k: usize| -> Vec<QMatrix> {
                w.degrees()
                    .map(|d| {
                        let i = w.index(d);
                        let mm = &incl[i];
                        mm.block(offs[i][k], offs[i][k + 1] - offs[i][k], 0, mm.cols())
                    })
                    .collect()
            };
            to_m.push(CompMap::Degreewise(block(0)));
            for (t, s) in sigma.iter_mut().enumerate() {
                s.push(CompMap::Degreewise(block(t + 1)));
            }
            comps.push(value);
            incl_all.push(incl);
        }
        let value = ModuleValue::new(rl, comps)?;
        let mut ext = BTreeMap::new();
        for ((k, kl, exts, _), s) in per_k.into_iter().zip(sigma) {
            let ev = ModuleValue::new(
                ring.ring(kl),
                exts.iter().map(|e| e.module.clone()).collect(),
            )?;
            let s = ModMap::new(s);
            s.check(&value, &ev, ring.map(dl, kl), w)?;
            ext.insert(k, (exts, ev, s));
        }
        let to_m = ModMap::new(to_m);
        to_m.check(&value, m.value(dl), &crate::ring::RingMap::identity(rl), w)?;
        nodes[l] = Some(NodeData {
            value,
            to_m,
            ext,
            incl: incl_all,
        });
    }
    let nodes: Vec<NodeData> = nodes
        .into_iter()
        .map(|n| n.expect("every node built"))
        .collect();

    // values on flags by extension from the first term
    let mut exts: Vec<Vec<Extension>> = Vec::with_capacity(idx.len());
    let mut values = Vec::with_capacity(idx.len());
    for f in 0..idx.len() {
        let k = idx.first(f);
        let phi = ring.map(idx.diagonal(k), f);
        let e = (0..phi.tgt_len())
            .map(|j| Extension::new(nodes[k].value.component(phi.src_of(j)), phi.component(j), w))
            .collect::<Result<Vec<_>>>()?;
        values.push(ModuleValue::new(
            ring.ring(f),
            e.iter().map(|x| x.module.clone()).collect(),
        )?);
        exts.push(e);
    }
    // unit k^!M(f(F)) → Γ(F), per component
    let units: Vec<Vec<CompMap>> = (0..idx.len())
        .map(|f| {
            let k = idx.first(f);
            let phi = ring.map(idx.diagonal(k), f);
            (0..phi.tgt_len())
                .map(|j| {
                    exts[f][j].unit(nodes[k].value.component(phi.src_of(j)), phi.component(j), w)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut maps = BTreeMap::new();
    for (e, f) in idx.relations() {
        if e == f {
            continue;
        }
        let (l, k) = (idx.first(e), idx.first(f));
        let (dl, dk) = (idx.diagonal(l), idx.diagonal(k));
        let (to_e, e_to_f) = (ring.map(dl, e), ring.map(e, f));
        let mut comps = Vec::with_capacity(e_to_f.tgt_len());
        for j in 0..e_to_f.tgt_len() {
            let c = e_to_f.src_of(j);
            let i = to_e.src_of(c);
            let src = nodes[l].value.component(i);
            let h = if l == k {
                units[f][j].clone()
            } else {
                // σ to R(K⊃L) ⊗ k^!M(K), then on to Γ(F)
                let kl = chain_flag(idx, &[k, l])?;
                let (kexts, kval, s) = &nodes[l].ext[&k];
                let (to_kl, kl_to_f) = (ring.map(dk, kl), ring.map(kl, f));
                let i2 = kl_to_f.src_of(j);
                let i3 = to_kl.src_of(i2);
                let on = kexts[i2].induced(
                    nodes[k].value.component(i3),
                    values[f].component(j),
                    to_kl.component(i2),
                    kl_to_f.component(j),
                    &units[f][j],
                    w,
                )?;
                s.component(i2).then(
                    &on,
                    src,
                    kval.component(i2),
                    values[f].component(j),
                    kl_to_f.component(j),
                    w,
                )?
            };
            comps.push(exts[e][c].induced(
                src,
                values[f].component(j),
                to_e.component(c),
                e_to_f.component(j),
                &h,
                w,
            )?);
        }
        maps.insert((e, f), ModMap::new(comps));
    }
    let module = ModuleDiagram::new(ring.clone(), w, values, maps)?;

    // λ at F: R(F) ⊗ k^!M(f(F)) → M(F) from k^!M(f(F)) → M((f(F))) → M(F)
    let lambda = (0..idx.len())
        .map(|f| {
            let k = idx.first(f);
            let dk = idx.diagonal(k);
            let phi = ring.map(dk, f);
            let comps = (0..phi.tgt_len())
                .map(|j| {
                    let i = phi.src_of(j);
                    let src = nodes[k].value.component(i);
                    let g = nodes[k].to_m.component(i).then(
                        m.map(dk, f).component(j),
                        src,
                        m.value(dk).component(i),
                        m.value(f).component(j),
                        phi.component(j),
                        w,
                    )?;
                    let id = CompRingMap::identity(phi.component(j).tgt());
                    exts[f][j].induced(src, m.value(f).component(j), phi.component(j), &id, &g, w)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ModMap::new(comps))
        })
        .collect::<Result<Vec<_>>>()?;
    let lambda = DiagramMorphism::new(&module, m, lambda)?;
    Ok(GammaV {
        module,
        lambda,
        nodes,
        exts,
    })
}

impl GammaV {
    /// The unique `ĝ: T → Γ_v M` with `λ ĝ = g`, for extended `T`.
    pub fn lift(
        &self,
        t: &ModuleDiagram,
        g: &DiagramMorphism,
        m: &ModuleDiagram,
    ) -> Result<DiagramMorphism> {
        let ext = is_extended(t)?;
        if !ext.passed() {
            return precondition(format!(
                "lifting from a module that is not extended: {}",
                ext.witness().unwrap_or_default()
            ));
        }
        let w = m.window();
        let ring = m.ring();
        let idx = ring.index();
        let base = idx.base().clone();
        let mut order: Vec<usize> = (0..base.len()).collect();
        order.sort_by_key(|&k| (base.codim(k), k));
        // nodewise maps T((K)) → k^!M(K), degreewise per component
        let mut node_maps: Vec<Option<Vec<Vec<QMatrix>>>> = vec![None; base.len()];
        for &l in &order {
            let dl = idx.diagonal(l);
            let nd = &self.nodes[l];
            let tl = t.value(dl);
            let id_l = crate::ring::RingMap::identity(ring.ring(dl));
            let gl = &g.component(dl);
            if nd.incl.is_empty() {
                let mats = (0..tl.len())
                    .map(|j| {
                        gl.component(j).to_degreewise(
                            tl.component(j),
                            m.value(dl).component(j),
                            id_l.component(j),
                            w,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                node_maps[l] = Some(mats);
                continue;
            }
            let mut per_comp = Vec::with_capacity(tl.len());
            for j in 0..tl.len() {
                let src = tl.component(j);
                let mut stack = gl.component(j).to_degreewise(
                    src,
                    m.value(dl).component(j),
                    id_l.component(j),
                    w,
                )?;
                for (&k, (kexts, kval, _)) in &nd.ext {
                    let dk = idx.diagonal(k);
                    let kl = chain_flag(idx, &[k, l])?;
                    let phi = ring.map(dk, kl);
                    let i = phi.src_of(j);
                    // T((L)) → T((K⊃L)) ≅ R(K⊃L) ⊗ T((K)) → R(K⊃L) ⊗ k^!M(K)
                    let tk = t.value(dk).component(i);
                    let text = Extension::new(tk, phi.component(j), w)?;
                    let id = CompRingMap::identity(phi.component(j).tgt());
                    let u = text.induced(
                        tk,
                        t.value(kl).component(j),
                        phi.component(j),
                        &id,
                        t.map(dk, kl).component(j),
                        w,
                    )?;
                    let uinv = u.inverse(&text.module, t.value(kl).component(j), w)?;
                    let gk = CompMap::from_degreewise(
                        tk,
                        self.nodes[k].value.component(i),
                        node_maps[k].as_ref().unwrap()[i].clone(),
                        w,
                    )?;
                    let unit =
                        kexts[j].unit(self.nodes[k].value.component(i), phi.component(j), w)?;
                    let gk_unit = gk.then(
                        &unit,
                        tk,
                        self.nodes[k].value.component(i),
                        kval.component(j),
                        phi.component(j),
                        w,
                    )?;
                    let ext_g =
                        text.induced(tk, kval.component(j), phi.component(j), &id, &gk_unit, w)?;
                    let lj = ring.map(dl, kl).component(j).clone();
                    let path = t
                        .map(dl, kl)
                        .component(j)
                        .then(&uinv, src, t.value(kl).component(j), &text.module, &id, w)?
                        .then(&ext_g, src, &text.module, kval.component(j), &id, w)?;
                    let mats = path.to_degreewise(src, kval.component(j), &lj, w)?;
                    stack = stack.iter().zip(&mats).map(|(a, b)| a.vstack(b)).collect();
                }
                let incl = &nd.incl[j];
                let mats = w
                    .degrees()
                    .map(|d| {
                        let i = w.index(d);
                        let y = &stack[i];
                        let cols = (0..y.cols())
                            .map(|c| {
                                incl[i].solve(&y.col(c)).ok_or_else(|| {
                                    Error::Construction(format!(
                                        "no lift at {} in degree {d}",
                                        base.label(l)
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(QMatrix::from_cols(incl[i].cols(), &cols))
                    })
                    .collect::<Result<Vec<_>>>()?;
                per_comp.push(mats);
            }
            node_maps[l] = Some(per_comp);
        }
        // on flags: T(F) ≅ R(F) ⊗ T((f(F))) → R(F) ⊗ k^!M(f(F))
        let comps = (0..idx.len())
            .map(|f| {
                let k = idx.first(f);
                let dk = idx.diagonal(k);
                let phi = ring.map(dk, f);
                let comps = (0..phi.tgt_len())
                    .map(|j| {
                        let i = phi.src_of(j);
                        let tk = t.value(dk).component(i);
                        let nk = self.nodes[k].value.component(i);
                        let text = Extension::new(tk, phi.component(j), w)?;
                        let id = CompRingMap::identity(phi.component(j).tgt());
                        let u = text.induced(
                            tk,
                            t.value(f).component(j),
                            phi.component(j),
                            &id,
                            t.map(dk, f).component(j),
                            w,
                        )?;
                        let uinv = u.inverse(&text.module, t.value(f).component(j), w)?;
                        let gk = CompMap::from_degreewise(
                            tk,
                            nk,
                            node_maps[k].as_ref().unwrap()[i].clone(),
                            w,
                        )?;
                        let unit = self.exts[f][j].unit(nk, phi.component(j), w)?;
                        let gk_unit = gk.then(
                            &unit,
                            tk,
                            nk,
                            self.module.value(f).component(j),
                            phi.component(j),
                            w,
                        )?;
                        let ext_g = text.induced(
                            tk,
                            self.module.value(f).component(j),
                            phi.component(j),
                            &id,
                            &gk_unit,
                            w,
                        )?;
                        uinv.then(
                            &ext_g,
                            t.value(f).component(j),
                            &text.module,
                            self.module.value(f).component(j),
                            &id,
                            w,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ModMap::new(comps))
            })
            .collect::<Result<Vec<_>>>()?;
        let ghat = DiagramMorphism::new(t, &self.module, comps)?;
        let back = ghat.then(&self.lambda, t, &self.module, m)?;
        if !back.equals(g, t, m)? {
            return Err(Error::Construction(
                "the lift does not recover the map".into(),
            ));
        }
        Ok(ghat)
    }

    /// Whether every pullback inclusion is injective in every window degree,
    /// so that maps into `Γ_v M` are determined by their components.
    pub fn uniqueness_certified(&self) -> bool {
        self.nodes.iter().all(|n| {
            n.incl
                .iter()
                .all(|per| per.iter().all(|m| m.rank() == m.cols()))
        })
    }
}

/// `Γ_v` on a morphism `θ: M → M'`: the lift of `θ λ`.
pub fn gamma_v_map(
    theta: &DiagramMorphism,
    a: &GammaV,
    b: &GammaV,
    m: &ModuleDiagram,
    mp: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let g = a.lambda.then(theta, &a.module, m, mp)?;
    b.lift(&a.module, &g, mp)
}

/// `Γ_d N̄ = π_!^e Γ_v eN̄` for `N̄` over a pushed-forward diagram, with the
/// comparison `Γ_d N̄ → π_!^e eN̄ → N̄` through `π_!^e λ` and the inverse unit.
#[derive(Clone, Debug)]
pub struct GammaD {
    pub module: ModuleDiagram,
    pub gamma: GammaV,
    pub to_input: DiagramMorphism,
}

pub fn gamma_d(push: &Pushforward, n: &ModuleDiagram) -> Result<GammaD> {
    let (eta, en_adapted, en) = adapted_unit(push, n)?;
    let eta_inv = eta.inverse(n, &en_adapted.module)?;
    let gamma = gamma_v(&en)?;
    let out = pi_shriek_e(push, &gamma.module)?;
    let lam = pi_shriek_e_map(push, &gamma.lambda, &out, &en_adapted, &gamma.module, &en)?;
    let to_input = lam.then(&eta_inv, &out.module, &en_adapted.module, n)?;
    Ok(GammaD {
        module: out.module,
        gamma,
        to_input,
    })
}

/// A basis of the degree-`d` sections of `M`: families `(x_K)` of elements
/// of `M((K))` whose images agree in every `M((K⊃L))`. Each section is
/// returned per node and component.
pub fn sections(m: &ModuleDiagram, d: i64) -> Result<Vec<Vec<Vec<Elem>>>> {
    let w = m.window();
    if !w.contains(d) {
        return Err(Error::Window(d, w.lo, w.hi));
    }
    let ring = m.ring();
    let idx = ring.index();
    let base = idx.base();
    let i = w.index(d);
    // coordinates: node-major, then component
    let mut offs: Vec<Vec<usize>> = Vec::with_capacity(base.len());
    let mut n = 0;
    for k in 0..base.len() {
        let v = m.value(idx.diagonal(k));
        let mut o = Vec::with_capacity(v.len());
        for c in v.components() {
            o.push(n);
            n += c.dim(w, d)?;
        }
        offs.push(o);
    }
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for k in 0..base.len() {
        for l in 0..base.len() {
            if !base.lt(l, k) {
                continue;
            }
            let kl = chain_flag(idx, &[k, l])?;
            let tgt = m.value(kl);
            for j in 0..tgt.len() {
                let dim = tgt.component(j).dim(w, d)?;
                let mut block = vec![vec![Q::from_integer(0.into()); n]; dim];
                for (end, sign) in [(k, 1i64), (l, -1i64)] {
                    let de = idx.diagonal(end);
                    let phi = ring.map(de, kl);
                    let s = phi.src_of(j);
                    let src = m.value(de).component(s);
                    let mat = &m.map(de, kl).component(j).to_degreewise(
                        src,
                        tgt.component(j),
                        phi.component(j),
                        w,
                    )?[i];
                    for r in 0..dim {
                        for c in 0..mat.cols() {
                            block[r][offs[end][s] + c] +=
                                mat.get(r, c) * Q::from_integer(sign.into());
                        }
                    }
                }
                rows.extend(block);
            }
        }
    }
    let basis = QMatrix::from_rows(n, rows).kernel();
    basis
        .iter()
        .map(|x| {
            (0..base.len())
                .map(|k| {
                    let v = m.value(idx.diagonal(k));
                    (0..v.len())
                        .map(|j| {
                            let c = v.component(j);
                            let o = offs[k][j];
                            c.from_piece(w, d, &x[o..o + c.dim(w, d)?])
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// The map from the free module on `degrees` sending generator `i` to the
/// section `chosen[i]` of the matching degree.
pub fn section_map(
    t: &ModuleDiagram,
    degrees: &[i64],
    chosen: &[Vec<Vec<Elem>>],
    m: &ModuleDiagram,
) -> Result<DiagramMorphism> {
    let w = m.window();
    let ring = m.ring();
    let idx = ring.index();
    let comps = (0..idx.len())
        .map(|f| {
            let l = idx.last(f);
            let dl = idx.diagonal(l);
            let phi = ring.map(dl, f);
            let comps = (0..phi.tgt_len())
                .map(|j| {
                    let s = phi.src_of(j);
                    let images = chosen
                        .iter()
                        .zip(degrees)
                        .map(|(sec, &d)| {
                            m.map(dl, f).component(j).apply(
                                m.value(dl).component(s),
                                m.value(f).component(j),
                                phi.component(j),
                                w,
                                &sec[l][s],
                                d,
                            )
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(CompMap::Basis(images))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ModMap::new(comps))
        })
        .collect::<Result<Vec<_>>>()?;
    DiagramMorphism::new(t, m, comps)
}
