//! The rank-1 model with its infinite fiber `{C_i : i ≥ 1}`.
//!
//! A module over `∏_i ℚ[c_i]` is stored by its stalks `e_iN` and its germ:
//! an exceptional stalk for finitely many `i`, one tail stalk for all other
//! `i`, and a germ `G` with `γ: G → N_tail` describing which tail-uniform
//! families belong to `N`. Localizing at the Euler classes `(c_1, …, c_n, 1,
//! …)` inverts `c` in every stalk but leaves the germ integral, which is how
//! `𝓔⁻¹∏` differs from `∏𝓔⁻¹`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::modules::{CompMap, CompModule, Elem, Extension, Pieces, Window};
use crate::ring::linalg::unit_vec;
use crate::ring::{CompRing, CompRingMap, Fraction, Poly, QMatrix, QVec, Q};

/// Position in the fiber: an exceptional index or the common tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    At(u64),
    Tail,
}

impl std::fmt::Display for Slot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slot::At(i) => write!(f, "C_{i}"),
            Slot::Tail => write!(f, "tail"),
        }
    }
}

/// A family indexed by `i ≥ 1`: finitely many exceptional values and one tail
/// value shared by every other index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AeFamily<T> {
    exceptional: BTreeMap<u64, T>,
    tail: T,
}

impl<T> AeFamily<T> {
    pub fn uniform(tail: T) -> Self {
        AeFamily {
            exceptional: BTreeMap::new(),
            tail,
        }
    }

    /// Replaces the value at index `i ≥ 1`.
    pub fn with(mut self, i: u64, value: T) -> Self {
        assert!(i >= 1, "the fiber is indexed from 1");
        self.exceptional.insert(i, value);
        self
    }

    pub fn get(&self, i: u64) -> &T {
        self.exceptional.get(&i).unwrap_or(&self.tail)
    }

    pub fn at(&self, s: Slot) -> &T {
        match s {
            Slot::At(i) => self.get(i),
            Slot::Tail => &self.tail,
        }
    }

    pub fn tail(&self) -> &T {
        &self.tail
    }

    pub fn exceptional(&self) -> &BTreeMap<u64, T> {
        &self.exceptional
    }

    /// Exceptional slots in increasing order, then the tail.
    pub fn slots(&self) -> Vec<Slot> {
        self.exceptional
            .keys()
            .map(|&i| Slot::At(i))
            .chain(std::iter::once(Slot::Tail))
            .collect()
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(Slot, &T) -> Result<U>) -> Result<AeFamily<U>> {
        let mut exceptional = BTreeMap::new();
        for (&i, x) in &self.exceptional {
            exceptional.insert(i, f(Slot::At(i), x)?);
        }
        Ok(AeFamily {
            exceptional,
            tail: f(Slot::Tail, &self.tail)?,
        })
    }

    /// Pointwise combination over the union of the exceptional sets.
    pub fn try_zip<U, V>(
        &self,
        other: &AeFamily<U>,
        mut f: impl FnMut(Slot, &T, &U) -> Result<V>,
    ) -> Result<AeFamily<V>> {
        let keys: std::collections::BTreeSet<u64> = self
            .exceptional
            .keys()
            .chain(other.exceptional.keys())
            .copied()
            .collect();
        let mut exceptional = BTreeMap::new();
        for i in keys {
            exceptional.insert(i, f(Slot::At(i), self.get(i), other.get(i))?);
        }
        Ok(AeFamily {
            exceptional,
            tail: f(Slot::Tail, &self.tail, &other.tail)?,
        })
    }
}

/// The rings of the model: `k = ℚ`, `ℚ[c]` and `ℚ[c, c⁻¹]`, with the window
/// every degreewise computation runs on.
#[derive(Clone, Debug)]
pub struct Rank1 {
    pub field: CompRing,
    pub poly: CompRing,
    pub laurent: CompRing,
    /// `k → ℚ[c]`.
    pub unit: CompRingMap,
    /// `ℚ[c] → ℚ[c, c⁻¹]`.
    pub loc: CompRingMap,
    pub window: Window,
}

impl Rank1 {
    pub fn new(window: Window) -> Result<Self> {
        let field = CompRing::polynomial(0);
        let poly = CompRing::polynomial(1);
        let laurent = CompRing::localized(1, &[Poly::var(1, 0)])?;
        let unit = CompRingMap::new(&field, &poly, Vec::new())?;
        let loc = CompRingMap::localization(&poly, &laurent)?;
        Ok(Rank1 {
            field,
            poly,
            laurent,
            unit,
            loc,
            window,
        })
    }

    fn id_poly(&self) -> CompRingMap {
        CompRingMap::identity(&self.poly)
    }

    fn id_laurent(&self) -> CompRingMap {
        CompRingMap::identity(&self.laurent)
    }

    pub fn v_module(&self, v: &[i64]) -> CompModule {
        CompModule::free(self.field.clone(), v.to_vec())
    }

    pub fn free(&self, degrees: &[i64]) -> CompModule {
        CompModule::free(self.poly.clone(), degrees.to_vec())
    }

    /// `ℚ[c, c⁻¹] ⊗ V`, the common value of every `P_i`.
    pub fn p_module(&self, v: &[i64]) -> CompModule {
        CompModule::free(self.laurent.clone(), v.to_vec())
    }

    /// `ℚ[c] ⊗ V → ℚ[c, c⁻¹] ⊗ V`.
    fn integral_to_p(&self, v: &[i64]) -> CompMap {
        let p = self.p_module(v);
        CompMap::Basis((0..v.len()).map(|i| p.basis_elem(i)).collect())
    }

    /// `V → ℚ[c] ⊗ V`.
    fn v_to_integral(&self, v: &[i64]) -> CompMap {
        let n = self.free(v);
        CompMap::Basis((0..v.len()).map(|i| n.basis_elem(i)).collect())
    }

    /// `ℚ[c]/c^length` on a generator of the given degree.
    pub fn cyclic_torsion(&self, degree: i64, length: u32) -> Result<CompModule> {
        let w = self.window;
        let free = Pieces::free(&self.poly, w, &[degree]);
        let spaces: Vec<Vec<QVec>> = w
            .degrees()
            .map(|d| {
                let n = free.dim(d);
                if d >= degree + 2 * length as i64 {
                    (0..n).map(|j| unit_vec(n, j)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let (p, _) = free.quotient(&self.poly, &spaces)?;
        CompModule::from_pieces(self.poly.clone(), p)
    }

    /// Lattice `N_i ⊂ ℚ[c, c⁻¹] ⊗ V` on the given basis images.
    pub fn lattice(&self, degrees: &[i64], images: Vec<Vec<Fraction>>) -> Stalk {
        Stalk {
            module: self.free(degrees),
            to_p: CompMap::Basis(images.into_iter().map(Elem::Coords).collect()),
        }
    }

    /// The standard stalk `ℚ[c] ⊗ V` with its inclusion.
    pub fn standard_stalk(&self, v: &[i64]) -> Stalk {
        Stalk {
            module: self.free(v),
            to_p: self.integral_to_p(v),
        }
    }

    /// `c^e` in the Laurent ring.
    pub fn c_pow(&self, e: i32) -> Fraction {
        self.laurent.mono(&vec![e])
    }
}

/// One stalk `N_i` (over `ℚ[c]`) with its map to `P_i = ℚ[c, c⁻¹] ⊗ V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stalk {
    pub module: CompModule,
    pub to_p: CompMap,
}

impl Stalk {
    /// `None` when `ℚ[c, c⁻¹] ⊗ N_i → P_i` is an isomorphism.
    pub fn qc_defect(&self, r: &Rank1, v: &[i64]) -> Result<Option<String>> {
        let w = r.window;
        let p = r.p_module(v);
        self.to_p.check(&self.module, &p, &r.loc, w)?;
        let ext = Extension::new(&self.module, &r.loc, w)?;
        let induced = ext.induced(&self.module, &p, &r.loc, &r.id_laurent(), &self.to_p, w)?;
        induced.iso_defect(&ext.module, &p, w)
    }

    fn to_p_matrices(&self, r: &Rank1, v: &[i64]) -> Result<Vec<QMatrix>> {
        self.to_p
            .to_degreewise(&self.module, &r.p_module(v), &r.loc, r.window)
    }
}

fn check_stalks(r: &Rank1, v: &[i64], stalks: &AeFamily<Stalk>) -> Result<()> {
    for s in stalks.slots() {
        if let Some(d) = stalks.at(s).qc_defect(r, v)? {
            return precondition(format!("stalk at {s} is not quasi-coherent: {d}"));
        }
    }
    Ok(())
}

/// An object `(N_i → P_i ← V, κ)` of the toral model. Every `P_i` is
/// `ℚ[c_i, c_i⁻¹] ⊗ V`; the continuity structure `κ: V → 𝓔⁻¹∏N_i` sends `v`
/// to its image in `P_i` at exceptional indices and to `κ_tail(v) ∈ N_tail`
/// elsewhere, so it is determined by `κ_tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToralObject {
    pub v: Vec<i64>,
    pub stalks: AeFamily<Stalk>,
    /// `V → N_tail` along `k → ℚ[c]`.
    pub kappa: CompMap,
}

impl ToralObject {
    /// Builds `κ` by lifting each basis vector of `V` into the tail stalk.
    pub fn new(r: &Rank1, v: Vec<i64>, stalks: AeFamily<Stalk>) -> Result<Self> {
        check_stalks(r, &v, &stalks)?;
        let w = r.window;
        let tail = stalks.tail();
        let mats = tail.to_p_matrices(r, &v)?;
        let p = r.p_module(&v);
        let mut images = Vec::with_capacity(v.len());
        for (k, &g) in v.iter().enumerate() {
            if !w.contains(g) {
                return Err(Error::Window(g, w.lo, w.hi));
            }
            let target = p.to_piece(w, &p.basis_elem(k), g)?;
            let x = mats[w.index(g)].solve(&target).ok_or_else(|| {
                Error::Precondition(format!(
                    "κ is not almost everywhere integral: generator {k} of V is not in the tail stalk"
                ))
            })?;
            images.push(tail.module.from_piece(w, g, &x)?);
        }
        Ok(ToralObject {
            v,
            stalks,
            kappa: CompMap::Basis(images),
        })
    }

    pub fn with_kappa(
        r: &Rank1,
        v: Vec<i64>,
        stalks: AeFamily<Stalk>,
        kappa: CompMap,
    ) -> Result<Self> {
        let o = ToralObject { v, stalks, kappa };
        o.check(r)?;
        Ok(o)
    }

    pub fn check(&self, r: &Rank1) -> Result<()> {
        check_stalks(r, &self.v, &self.stalks)?;
        let w = r.window;
        let (vm, tail, p) = (r.v_module(&self.v), self.stalks.tail(), r.p_module(&self.v));
        self.kappa.check(&vm, &tail.module, &r.unit, w)?;
        let composite = self
            .kappa
            .then(&tail.to_p, &vm, &tail.module, &p, &r.loc, w)?;
        let canonical = CompMap::Basis((0..self.v.len()).map(|i| p.basis_elem(i)).collect());
        let phi = r.unit.then(&r.loc)?;
        if !composite.equals(&canonical, &vm, &p, &phi, w)? {
            return precondition("κ does not lift V → ∏P_i");
        }
        Ok(())
    }
}

/// An object `N → P ← V` of the connected model over `∏_i ℚ[c_i]`, with
/// `P = 𝓔⁻¹R ⊗ V`. `N` is given by its stalks and germ; `𝓔⁻¹N ≅ P` holds
/// when every stalk is quasi-coherent and `G → ℚ[c] ⊗ V` is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedObject {
    pub v: Vec<i64>,
    pub stalks: AeFamily<Stalk>,
    pub germ: CompModule,
    /// `γ: G → N_tail`.
    pub germ_map: CompMap,
    /// The tail part of `N → P`, `G → ℚ[c] ⊗ V`.
    pub germ_to_p: CompMap,
}

impl ConnectedObject {
    pub fn new(
        r: &Rank1,
        v: Vec<i64>,
        stalks: AeFamily<Stalk>,
        germ: CompModule,
        germ_map: CompMap,
        germ_to_p: CompMap,
    ) -> Result<Self> {
        let o = ConnectedObject {
            v,
            stalks,
            germ,
            germ_map,
            germ_to_p,
        };
        o.check(r)?;
        Ok(o)
    }

    /// `R → 𝓔⁻¹R ← ℚ`.
    pub fn unit(r: &Rank1) -> Result<Self> {
        let v = vec![0];
        let germ = r.free(&v);
        let id = CompMap::identity(&germ, r.window)?;
        Self::new(
            r,
            v.clone(),
            AeFamily::uniform(r.standard_stalk(&v)),
            germ,
            id.clone(),
            id,
        )
    }

    pub fn check(&self, r: &Rank1) -> Result<()> {
        check_stalks(r, &self.v, &self.stalks)?;
        let w = r.window;
        let tail = self.stalks.tail();
        let integral = r.free(&self.v);
        let id = r.id_poly();
        self.germ_map.check(&self.germ, &tail.module, &id, w)?;
        self.germ_to_p.check(&self.germ, &integral, &id, w)?;
        if let Some(d) = self.germ_to_p.iso_defect(&self.germ, &integral, w)? {
            return precondition(format!("germ of 𝓔⁻¹N → P is not an isomorphism: {d}"));
        }
        let p = r.p_module(&self.v);
        let a = self
            .germ_map
            .then(&tail.to_p, &self.germ, &tail.module, &p, &r.loc, w)?;
        let b = self.germ_to_p.then(
            &r.integral_to_p(&self.v),
            &self.germ,
            &integral,
            &p,
            &r.loc,
            w,
        )?;
        if !a.equals(&b, &self.germ, &p, &r.loc, w)? {
            return precondition("germ and tail stalk disagree in P");
        }
        Ok(())
    }
}

/// `e`: stalks are `e_iN → e_iP` and `κ` is `V → P ≅ 𝓔⁻¹N → 𝓔⁻¹∏e_iN`.
pub fn rank1_e(r: &Rank1, c: &ConnectedObject) -> Result<ToralObject> {
    let w = r.window;
    let integral = r.free(&c.v);
    let inv = c.germ_to_p.inverse(&c.germ, &integral, w)?;
    let through =
        r.v_to_integral(&c.v)
            .then(&inv, &r.v_module(&c.v), &integral, &c.germ, &r.id_poly(), w)?;
    let kappa = through.then(
        &c.germ_map,
        &r.v_module(&c.v),
        &c.germ,
        &c.stalks.tail().module,
        &r.id_poly(),
        w,
    )?;
    ToralObject::with_kappa(r, c.v.clone(), c.stalks.clone(), kappa)
}

/// A pullback `A ×_C B` of windowed pieces with its projections.
struct Pullback {
    pieces: Pieces,
    incl: Vec<QMatrix>,
    dim_a: Vec<usize>,
}

impl Pullback {
    fn new(
        ring: &CompRing,
        w: Window,
        a: &Pieces,
        b: &Pieces,
        f: &[QMatrix],
        g: &[QMatrix],
    ) -> Result<Self> {
        let sum = Pieces::direct_sum(ring, w, &[a, b]);
        let diff: Vec<QMatrix> = w
            .degrees()
            .map(|d| {
                let i = w.index(d);
                f[i].hstack(&g[i].scale(&Q::from_integer((-1).into())))
            })
            .collect();
        let (pieces, incl) = sum.kernel(ring, &diff)?;
        Ok(Pullback {
            pieces,
            incl,
            dim_a: w.degrees().map(|d| a.dim(d)).collect(),
        })
    }

    fn pr_a(&self) -> Vec<QMatrix> {
        self.incl
            .iter()
            .zip(&self.dim_a)
            .map(|(m, &n)| m.block(0, n, 0, m.cols()))
            .collect()
    }

    fn pr_b(&self) -> Vec<QMatrix> {
        self.incl
            .iter()
            .zip(&self.dim_a)
            .map(|(m, &n)| m.block(n, m.rows() - n, 0, m.cols()))
            .collect()
    }

    /// The map into the pullback with the given components.
    fn lift(&self, w: Window, xa: &[QMatrix], xb: &[QMatrix]) -> Result<Vec<QMatrix>> {
        w.degrees()
            .map(|d| {
                let i = w.index(d);
                let stacked = xa[i].vstack(&xb[i]);
                let cols = (0..stacked.cols())
                    .map(|j| {
                        self.incl[i].solve(&stacked.col(j)).ok_or_else(|| {
                            Error::Construction(format!(
                                "degree {d}: components do not agree in the pullback"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(QMatrix::from_cols(self.pieces.dim(d), &cols))
            })
            .collect()
    }
}

/// `Γq_!^d` applied to a toral object, with the projections back onto the
/// input stalks.
#[derive(Clone, Debug)]
pub struct GammaQd {
    pub object: ConnectedObject,
    /// `e_iN → N_i`.
    pub to_input: AeFamily<CompMap>,
}

/// `q_!^d` gives `∏N_i → ∏P_i ← V`; `N` is the pullback of
/// `𝓔⁻¹R ⊗ V → 𝓔⁻¹∏N_i ← ∏N_i` and `P = 𝓔⁻¹N`.
pub fn rank1_gamma_qd(r: &Rank1, a: &ToralObject) -> Result<GammaQd> {
    a.check(r)?;
    let w = r.window;
    let v = &a.v;
    let p = r.p_module(v);
    let mut parts: BTreeMap<Slot, Pullback> = BTreeMap::new();
    let stalks = a.stalks.try_map(|s, _| {
        let pb = stalk_pullback(r, a, s)?;
        let module = CompModule::from_pieces(r.poly.clone(), pb.pieces.clone())?;
        let stalk = Stalk {
            module,
            to_p: CompMap::Degreewise(pb.pr_a()),
        };
        parts.insert(s, pb);
        Ok(stalk)
    })?;
    let to_input = stalks.try_map(|s, _| Ok(CompMap::Degreewise(parts[&s].pr_b())))?;

    let integral = r.free(v);
    let gpb = germ_pullback(r, a)?;
    let germ = CompModule::from_pieces(r.poly.clone(), gpb.pieces.clone())?;
    let germ_to_p = CompMap::Degreewise(gpb.pr_a());

    // γ: a germ element (x, y) goes to (x, y) in the tail stalk pullback
    let incl = r.integral_to_p(v).to_degreewise(&integral, &p, &r.loc, w)?;
    let xa: Vec<QMatrix> = incl
        .iter()
        .zip(gpb.pr_a())
        .map(|(m, pr)| m.mul(&pr))
        .collect();
    let germ_map = CompMap::Degreewise(parts[&Slot::Tail].lift(w, &xa, &gpb.pr_b())?);

    let object = ConnectedObject::new(r, v.clone(), stalks, germ, germ_map, germ_to_p)?;
    Ok(GammaQd { object, to_input })
}

/// Why `e(Γq_!^d A) ≅ A` fails for the projections onto `A`'s stalks, or
/// `None`.
pub fn toral_round_trip(r: &Rank1, a: &ToralObject) -> Result<Option<String>> {
    let w = r.window;
    let g = rank1_gamma_qd(r, a)?;
    let back = rank1_e(r, &g.object)?;
    if back.v != a.v {
        return Ok(Some("V changed".into()));
    }
    let p = r.p_module(&a.v);
    let id = r.id_poly();
    for s in back.stalks.slots().into_iter().chain(a.stalks.slots()) {
        let (new, old, pr) = (back.stalks.at(s), a.stalks.at(s), g.to_input.at(s));
        if let Some(d) = pr.iso_defect(&new.module, &old.module, w)? {
            return Ok(Some(format!("stalk {s}: {d}")));
        }
        let via = pr.then(&old.to_p, &new.module, &old.module, &p, &r.loc, w)?;
        if !via.equals(&new.to_p, &new.module, &p, &r.loc, w)? {
            return Ok(Some(format!("stalk {s}: maps to P disagree")));
        }
    }
    let (vm, nt, ot) = (
        r.v_module(&a.v),
        &back.stalks.tail().module,
        &a.stalks.tail().module,
    );
    let kappa = back.kappa.then(g.to_input.tail(), &vm, nt, ot, &id, w)?;
    if !kappa.equals(&a.kappa, &vm, ot, &r.unit, w)? {
        return Ok(Some("κ is not preserved".into()));
    }
    Ok(None)
}

/// Why the comparison `N → Γq_!^d(eN)` from the universal property of the
/// pullback fails to be an isomorphism, or `None`. For `N = R` this is the
/// statement that the defining square of `R` is a pullback.
pub fn connected_round_trip(r: &Rank1, c: &ConnectedObject) -> Result<Option<String>> {
    let w = r.window;
    let a = rank1_e(r, c)?;
    let g = rank1_gamma_qd(r, &a)?;
    let out = &g.object;
    let p = r.p_module(&c.v);
    let id = r.id_poly();
    let mut comparison = BTreeMap::new();
    for s in c.stalks.slots().into_iter().chain(out.stalks.slots()) {
        let (old, new) = (c.stalks.at(s), out.stalks.at(s));
        // (ν z, z) lands in the stalk pullback
        let xa = old.to_p_matrices(r, &c.v)?;
        let ob = old.module.pieces(w)?;
        let xb: Vec<QMatrix> = w.degrees().map(|d| QMatrix::identity(ob.dim(d))).collect();
        let pb = stalk_pullback(r, &a, s)?;
        let phi = CompMap::Degreewise(pb.lift(w, &xa, &xb)?);
        if let Some(d) = phi.iso_defect(&old.module, &new.module, w)? {
            return Ok(Some(format!("stalk {s}: {d}")));
        }
        let via = phi.then(&new.to_p, &old.module, &new.module, &p, &r.loc, w)?;
        if !via.equals(&old.to_p, &old.module, &p, &r.loc, w)? {
            return Ok(Some(format!("stalk {s}: maps to P disagree")));
        }
        comparison.insert(s, phi);
    }
    // germ: g ↦ (germ_to_p g, γ g)
    let integral = r.free(&c.v);
    let xa = c.germ_to_p.to_degreewise(&c.germ, &integral, &id, w)?;
    let xb = c
        .germ_map
        .to_degreewise(&c.germ, &c.stalks.tail().module, &id, w)?;
    let gpb = germ_pullback(r, &a)?;
    let phi = CompMap::Degreewise(gpb.lift(w, &xa, &xb)?);
    if let Some(d) = phi.iso_defect(&c.germ, &out.germ, w)? {
        return Ok(Some(format!("germ: {d}")));
    }
    let (old_tail, new_tail) = (&c.stalks.tail().module, &out.stalks.tail().module);
    let left = phi.then(&out.germ_map, &c.germ, &out.germ, new_tail, &id, w)?;
    let right = c.germ_map.then(
        &comparison[&Slot::Tail],
        &c.germ,
        old_tail,
        new_tail,
        &id,
        w,
    )?;
    if !left.equals(&right, &c.germ, new_tail, &id, w)? {
        return Ok(Some("germ comparison does not commute with γ".into()));
    }
    Ok(None)
}

fn stalk_pullback(r: &Rank1, a: &ToralObject, s: Slot) -> Result<Pullback> {
    let w = r.window;
    let st = a.stalks.at(s);
    let p = r.p_module(&a.v);
    let ext = Extension::new(&st.module, &r.loc, w)?;
    let induced = ext.induced(&st.module, &p, &r.loc, &r.id_laurent(), &st.to_p, w)?;
    let inv = induced.inverse(&ext.module, &p, w)?;
    let f = inv.to_degreewise(&p, &ext.module, &r.id_laurent(), w)?;
    let g = ext
        .unit(&st.module, &r.loc, w)?
        .to_degreewise(&st.module, &ext.module, &r.loc, w)?;
    Pullback::new(
        &r.poly,
        w,
        &p.restrict(&r.loc, w)?,
        &*st.module.pieces(w)?,
        &f,
        &g,
    )
}

fn germ_pullback(r: &Rank1, a: &ToralObject) -> Result<Pullback> {
    let w = r.window;
    let tail = a.stalks.tail();
    let integral = r.free(&a.v);
    let kext = Extension::new(&r.v_module(&a.v), &r.unit, w)?;
    let kbar = kext.induced(
        &r.v_module(&a.v),
        &tail.module,
        &r.unit,
        &r.id_poly(),
        &a.kappa,
        w,
    )?;
    let f = kbar.to_degreewise(&integral, &tail.module, &r.id_poly(), w)?;
    let tb = tail.module.pieces(w)?.into_owned();
    let g: Vec<QMatrix> = w.degrees().map(|d| QMatrix::identity(tb.dim(d))).collect();
    Pullback::new(&r.poly, w, &*integral.pieces(w)?, &tb, &f, &g)
}

/// Elements of `∏_i ℚ[c_i, c_i⁻¹]` with an almost-everywhere pattern.
pub type ScalarFamily = AeFamily<Fraction>;

fn integral(f: &Fraction) -> bool {
    f.den.iter().all(|&d| d == 0)
}

impl AeFamily<Fraction> {
    /// Membership in `𝓔⁻¹∏_i ℚ[c_i]`: all but finitely many components are
    /// denominator-free, i.e. the tail is.
    pub fn in_localized_product(&self) -> bool {
        integral(&self.tail)
    }

    /// Membership in `∏_i 𝓔⁻¹ℚ[c_i]`, where every component may carry a
    /// denominator.
    pub fn in_product_of_localizations(&self) -> bool {
        true
    }

    /// The Euler family `(c_i^{n_i})` with unit tail that clears every
    /// denominator, when one exists.
    pub fn clearing_euler_family(&self, r: &Rank1) -> Option<ScalarFamily> {
        if !self.in_localized_product() {
            return None;
        }
        let mut out = AeFamily::uniform(r.laurent.one());
        for (&i, x) in &self.exceptional {
            if !integral(x) {
                out = out.with(i, r.c_pow(x.den[0] as i32));
            }
        }
        Some(out)
    }

    pub fn mul(&self, other: &ScalarFamily, r: &Rank1) -> ScalarFamily {
        self.try_zip(other, |_, a, b| Ok(r.laurent.mul(a, b)))
            .expect("infallible")
    }

    pub fn is_integral(&self) -> bool {
        integral(&self.tail) && self.exceptional.values().all(integral)
    }
}

/// The family with component `c_i⁻¹` at every `i`.
pub fn strictness_witness(r: &Rank1) -> ScalarFamily {
    AeFamily::uniform(r.c_pow(-1))
}

/// Ten objects of the toral model covering zero, shifts, exceptional
/// lattices, torsion at exceptional indices and in the tail, and
/// non-diagonal identifications.
pub fn hand_built_objects(r: &Rank1) -> Result<Vec<(String, ToralObject)>> {
    let l = &r.laurent;
    let (one, zero) = (l.one(), l.zero());
    let c = |e: i32| r.c_pow(e);
    let mut out = Vec::new();
    let mut add = |name: &str, v: Vec<i64>, stalks: AeFamily<Stalk>| -> Result<()> {
        out.push((name.to_string(), ToralObject::new(r, v, stalks)?));
        Ok(())
    };
    add("zero", vec![], AeFamily::uniform(r.standard_stalk(&[])))?;
    add("unit", vec![0], AeFamily::uniform(r.standard_stalk(&[0])))?;
    add(
        "two generators",
        vec![0, 2],
        AeFamily::uniform(r.standard_stalk(&[0, 2])),
    )?;
    add(
        "shifted",
        vec![-2],
        AeFamily::uniform(r.standard_stalk(&[-2])),
    )?;
    add(
        "raised lattice at C_2",
        vec![0],
        AeFamily::uniform(r.standard_stalk(&[0])).with(2, r.lattice(&[2], vec![vec![c(1)]])),
    )?;
    add(
        "lattices at C_3 and C_5",
        vec![0],
        AeFamily::uniform(r.standard_stalk(&[0]))
            .with(3, r.lattice(&[-2], vec![vec![c(-1)]]))
            .with(5, r.lattice(&[4], vec![vec![c(2)]])),
    )?;
    // ℚ[c] ⊕ ℚ[c]/c² at C_2, the torsion dying in P
    let tor = r.cyclic_torsion(0, 2)?;
    let mixed = CompModule::direct_sum(&r.poly, r.window, &[&r.free(&[0]), &tor])?;
    let to_p = torsion_killing_map(r, &mixed, &[0], 1)?;
    add(
        "torsion at C_2",
        vec![0],
        AeFamily::uniform(r.standard_stalk(&[0])).with(
            2,
            Stalk {
                module: mixed,
                to_p,
            },
        ),
    )?;
    // torsion in every tail stalk; κ picks the torsion-free lift
    let tor1 = r.cyclic_torsion(2, 1)?;
    let tail = CompModule::direct_sum(&r.poly, r.window, &[&r.free(&[0]), &tor1])?;
    let to_p = torsion_killing_map(r, &tail, &[0], 1)?;
    add(
        "torsion in the tail",
        vec![0],
        AeFamily::uniform(Stalk { module: tail, to_p }),
    )?;
    add(
        "triangular tail",
        vec![0, 2],
        AeFamily::uniform(r.lattice(
            &[0, 2],
            vec![vec![one.clone(), zero.clone()], vec![c(1), one.clone()]],
        ))
        .with(
            7,
            r.lattice(
                &[2, 2],
                vec![vec![c(1), zero.clone()], vec![zero.clone(), one.clone()]],
            ),
        ),
    )?;
    add(
        "diagonal lattice at C_2",
        vec![0, 0],
        AeFamily::uniform(r.standard_stalk(&[0, 0])).with(
            2,
            r.lattice(
                &[0, 2],
                vec![vec![one.clone(), one.clone()], vec![c(1), zero.clone()]],
            ),
        ),
    )?;
    Ok(out)
}

/// The map `free ⊕ torsion → ℚ[c, c⁻¹] ⊗ V` sending the free part (the first
/// `rank` pieces coordinates) to the basis and the torsion to zero.
fn torsion_killing_map(r: &Rank1, m: &CompModule, v: &[i64], rank: usize) -> Result<CompMap> {
    let w = r.window;
    let p = r.p_module(v);
    let free = r.free(&v[..rank]);
    let pp = p.pieces(w)?;
    let mats = w
        .degrees()
        .map(|d| {
            let n = m.dim(w, d)?;
            let nf = free.dim(w, d)?;
            let mut out = QMatrix::zeros(pp.dim(d), n);
            for j in 0..nf {
                out.set(j, j, Q::from_integer(1.into()));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompMap::Degreewise(mats))
}

/// Toral objects that must be rejected, with the reason they fail.
pub fn rejected_objects(r: &Rank1) -> Vec<(String, Result<ToralObject>)> {
    let c = r.c_pow(1);
    vec![
        (
            "tail lattice c·ℚ[c]".into(),
            ToralObject::new(
                r,
                vec![0],
                AeFamily::uniform(r.lattice(&[2], vec![vec![c.clone()]])),
            ),
        ),
        (
            "zero stalk at C_2".into(),
            ToralObject::new(
                r,
                vec![0],
                AeFamily::uniform(r.standard_stalk(&[0]))
                    .with(2, r.lattice(&[0], vec![vec![r.laurent.zero()]])),
            ),
        ),
    ]
}
