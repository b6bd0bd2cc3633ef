//! Graded modules over one component ring, their elements and maps.
//!
//! A module is either free on homogeneous generators (exact over every
//! component ring) or given by its windowed pieces (finite-type rings only).
//! A map out of a free module is stored by the images of the basis; a map out
//! of a windowed module by its degreewise matrices.

use std::borrow::Cow;

use num_traits::{One, Zero};

use super::pieces::{Pieces, Presentation, Window};
use crate::error::{Error, Result};
use crate::ring::linalg::{is_zero_vec, unit_vec, zero_vec};
use crate::ring::{CompRing, CompRingMap, Fraction, QMatrix, QVec, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Free { degrees: Vec<i64> },
    Pieces(Pieces),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompModule {
    ring: CompRing,
    backend: Backend,
}

/// A homogeneous element: coordinates in the basis of a free module, or a
/// vector in one piece of a windowed module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Coords(Vec<Fraction>),
    Piece(i64, QVec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompMap {
    /// Images of the basis of a free source.
    Basis(Vec<Elem>),
    /// One matrix per window degree, for a windowed source.
    Degreewise(Vec<QMatrix>),
}

impl CompModule {
    pub fn free(ring: CompRing, degrees: Vec<i64>) -> Self {
        CompModule {
            ring,
            backend: Backend::Free { degrees },
        }
    }

    pub fn zero(ring: CompRing) -> Self {
        Self::free(ring, Vec::new())
    }

    pub fn from_pieces(ring: CompRing, pieces: Pieces) -> Result<Self> {
        if !ring.is_finite_type() {
            return Err(Error::Unsupported(format!(
                "windowed module over {}",
                ring.describe()
            )));
        }
        Ok(CompModule {
            ring,
            backend: Backend::Pieces(pieces),
        })
    }

    pub fn ring(&self) -> &CompRing {
        &self.ring
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn free_degrees(&self) -> Option<&[i64]> {
        match &self.backend {
            Backend::Free { degrees } => Some(degrees),
            Backend::Pieces(_) => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.backend, Backend::Free { .. })
    }

    pub fn is_zero(&self) -> bool {
        match &self.backend {
            Backend::Free { degrees } => degrees.is_empty(),
            Backend::Pieces(p) => p.is_zero(),
        }
    }

    /// The pieces of the module on the window.
    pub fn pieces(&self, w: Window) -> Result<Cow<'_, Pieces>> {
        match &self.backend {
            Backend::Free { degrees } => {
                if !self.ring.is_finite_type() {
                    return Err(Error::Unsupported(format!(
                        "graded pieces of a free module over {}",
                        self.ring.describe()
                    )));
                }
                Ok(Cow::Owned(Pieces::free(&self.ring, w, degrees)))
            }
            Backend::Pieces(p) => {
                if p.window() != w {
                    return Err(Error::Precondition(format!(
                        "module stored on window {} but inspected on {}",
                        p.window(),
                        w
                    )));
                }
                Ok(Cow::Borrowed(p))
            }
        }
    }

    pub fn dim(&self, w: Window, d: i64) -> Result<usize> {
        Ok(self.pieces(w)?.dim(d))
    }

    pub fn zero_elem(&self, w: Window, d: i64) -> Result<Elem> {
        Ok(match &self.backend {
            Backend::Free { degrees } => Elem::Coords(vec![self.ring.zero(); degrees.len()]),
            Backend::Pieces(p) => {
                if !w.contains(d) {
                    return Err(Error::Window(d, w.lo, w.hi));
                }
                Elem::Piece(d, zero_vec(p.dim(d)))
            }
        })
    }

    /// The `i`-th basis element of a free module.
    pub fn basis_elem(&self, i: usize) -> Elem {
        let n = self.free_degrees().expect("basis of a free module").len();
        Elem::Coords(
            (0..n)
                .map(|j| {
                    if i == j {
                        self.ring.one()
                    } else {
                        self.ring.zero()
                    }
                })
                .collect(),
        )
    }

    pub fn elem_is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Coords(c) => c.iter().all(|a| self.ring.is_zero(a)),
            Elem::Piece(_, v) => is_zero_vec(v),
        }
    }

    /// Vector of `x` in the degree-`d` piece.
    pub fn to_piece(&self, w: Window, x: &Elem, d: i64) -> Result<QVec> {
        match (x, &self.backend) {
            (Elem::Piece(e, v), _) => {
                if *e != d {
                    return Err(Error::Precondition(format!(
                        "element of degree {e} read in degree {d}"
                    )));
                }
                Ok(v.clone())
            }
            (Elem::Coords(c), Backend::Free { degrees }) => {
                if !self.ring.is_finite_type() {
                    return Err(Error::Unsupported(
                        "pieces of a non-finite free module".into(),
                    ));
                }
                if !w.contains(d) {
                    return Err(Error::Window(d, w.lo, w.hi));
                }
                let mut out = Vec::new();
                for (a, g) in c.iter().zip(degrees) {
                    out.extend(self.ring.coords(a, d - g)?);
                }
                Ok(out)
            }
            (Elem::Coords(_), Backend::Pieces(_)) => Err(Error::Construction(
                "coordinates given for a windowed module".into(),
            )),
        }
    }

    pub fn from_piece(&self, w: Window, d: i64, v: &[Q]) -> Result<Elem> {
        match &self.backend {
            Backend::Pieces(_) => Ok(Elem::Piece(d, v.to_vec())),
            Backend::Free { degrees } => {
                if !w.contains(d) {
                    return Err(Error::Window(d, w.lo, w.hi));
                }
                let mut coords = Vec::with_capacity(degrees.len());
                let mut off = 0;
                for g in degrees {
                    let n = self.ring.basis(d - g).len();
                    coords.push(self.ring.from_coords(&v[off..off + n], d - g));
                    off += n;
                }
                Ok(Elem::Coords(coords))
            }
        }
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        match (x, y) {
            (Elem::Coords(a), Elem::Coords(b)) => Ok(Elem::Coords(
                a.iter().zip(b).map(|(p, q)| self.ring.add(p, q)).collect(),
            )),
            (Elem::Piece(d, a), Elem::Piece(e, b)) if d == e => Ok(Elem::Piece(
                *d,
                a.iter().zip(b).map(|(p, q)| p + q).collect(),
            )),
            _ => Err(Error::Construction(
                "adding elements of different shapes".into(),
            )),
        }
    }

    pub fn scale(&self, x: &Elem, c: &Q) -> Elem {
        match x {
            Elem::Coords(a) => Elem::Coords(a.iter().map(|p| self.ring.scale(p, c)).collect()),
            Elem::Piece(d, a) => Elem::Piece(*d, a.iter().map(|p| p * c).collect()),
        }
    }

    /// `a · x` for `a` of degree `deg_a` and `x` of degree `deg_x`.
    pub fn smul(&self, w: Window, a: &Fraction, deg_a: i64, x: &Elem, deg_x: i64) -> Result<Elem> {
        match x {
            Elem::Coords(c) => Ok(Elem::Coords(
                c.iter().map(|p| self.ring.mul(a, p)).collect(),
            )),
            Elem::Piece(d, v) => {
                debug_assert_eq!(*d, deg_x);
                let p = self.pieces(w)?;
                Ok(Elem::Piece(d + deg_a, p.act(&self.ring, a, deg_a, *d, v)?))
            }
        }
    }

    pub fn elem_eq(&self, w: Window, x: &Elem, y: &Elem, d: i64) -> Result<bool> {
        match (x, y) {
            (Elem::Coords(a), Elem::Coords(b)) => Ok(a == b),
            (Elem::Piece(_, a), Elem::Piece(_, b)) => Ok(a == b),
            _ => Ok(self.to_piece(w, x, d)? == self.to_piece(w, y, d)?),
        }
    }

    pub fn render_elem(&self, x: &Elem) -> String {
        match x {
            Elem::Coords(c) => {
                let parts: Vec<String> = c.iter().map(|a| self.ring.render(a)).collect();
                format!("({})", parts.join(", "))
            }
            Elem::Piece(d, v) => {
                let parts: Vec<String> = v.iter().map(crate::ring::poly::q_str).collect();
                format!("[{}]@{}", parts.join(", "), d)
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.backend {
            Backend::Free { degrees } => {
                let d: Vec<String> = degrees.iter().map(|x| x.to_string()).collect();
                format!(
                    "free over {} on degrees [{}]",
                    self.ring.describe(),
                    d.join(", ")
                )
            }
            Backend::Pieces(p) => {
                format!(
                    "windowed over {} of total dimension {}",
                    self.ring.describe(),
                    p.total_dim()
                )
            }
        }
    }

    /// Restriction of scalars along `phi: R → S` of a module over `S`, as
    /// pieces over `R`.
    pub fn restrict(&self, phi: &CompRingMap, w: Window) -> Result<Pieces> {
        let src = phi.src();
        let p = self.pieces(w)?;
        let actions = (0..src.nvars())
            .map(|v| {
                let a = phi.apply(&src.var(v));
                w.degrees()
                    .map(|d| {
                        if d + 2 > w.hi {
                            Ok(QMatrix::zeros(0, p.dim(d)))
                        } else {
                            action_matrix(&self.ring, &p, &a, 2, d)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Pieces::new(src, w, p.dims().to_vec(), actions)
    }

    pub fn direct_sum(ring: &CompRing, w: Window, parts: &[&CompModule]) -> Result<CompModule> {
        if parts.iter().all(|m| m.is_free()) {
            let degrees = parts
                .iter()
                .flat_map(|m| m.free_degrees().unwrap().to_vec())
                .collect();
            return Ok(CompModule::free(ring.clone(), degrees));
        }
        let ps: Vec<Cow<Pieces>> = parts.iter().map(|m| m.pieces(w)).collect::<Result<_>>()?;
        let refs: Vec<&Pieces> = ps.iter().map(|p| p.as_ref()).collect();
        CompModule::from_pieces(ring.clone(), Pieces::direct_sum(ring, w, &refs))
    }
}

/// Matrix of multiplication by `a` (degree `deg_a`) from degree `d`.
pub fn action_matrix(
    ring: &CompRing,
    p: &Pieces,
    a: &Fraction,
    deg_a: i64,
    d: i64,
) -> Result<QMatrix> {
    let n = p.dim(d);
    let t = d + deg_a;
    let cols = (0..n)
        .map(|j| p.act(ring, a, deg_a, d, &unit_vec(n, j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QMatrix::from_cols(p.dim(t), &cols))
}

/// Determinant by cofactor expansion; the matrices met here are small.
pub fn det(ring: &CompRing, m: &[Vec<Fraction>]) -> Fraction {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let minor = minor(m, 0, j);
                let term = ring.mul(&m[0][j], &det(ring, &minor));
                acc = if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<Fraction>], r: usize, c: usize) -> Vec<Vec<Fraction>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

impl CompMap {
    pub fn identity(m: &CompModule, w: Window) -> Result<CompMap> {
        Ok(match m.backend() {
            Backend::Free { degrees } => {
                CompMap::Basis((0..degrees.len()).map(|i| m.basis_elem(i)).collect())
            }
            Backend::Pieces(p) => {
                CompMap::Degreewise(w.degrees().map(|d| QMatrix::identity(p.dim(d))).collect())
            }
        })
    }

    pub fn zero(src: &CompModule, tgt: &CompModule, w: Window) -> Result<CompMap> {
        Ok(match src.backend() {
            Backend::Free { degrees } => CompMap::Basis(
                degrees
                    .iter()
                    .map(|&d| tgt.zero_elem(w, d))
                    .collect::<Result<_>>()?,
            ),
            Backend::Pieces(p) => {
                let t = tgt.pieces(w)?;
                CompMap::Degreewise(
                    w.degrees()
                        .map(|d| QMatrix::zeros(t.dim(d), p.dim(d)))
                        .collect(),
                )
            }
        })
    }

    /// `f(x)` for `x` of degree `deg` in `src`, along `phi`.
    pub fn apply(
        &self,
        src: &CompModule,
        tgt: &CompModule,
        phi: &CompRingMap,
        w: Window,
        x: &Elem,
        deg: i64,
    ) -> Result<Elem> {
        match self {
            CompMap::Basis(images) => {
                let degrees = src
                    .free_degrees()
                    .ok_or_else(|| Error::Construction("basis map on a windowed module".into()))?;
                let coords = match x {
                    Elem::Coords(c) => Cow::Borrowed(c),
                    Elem::Piece(d, v) => match src.from_piece(w, *d, v)? {
                        Elem::Coords(c) => Cow::Owned(c),
                        Elem::Piece(..) => unreachable!(),
                    },
                };
                let mut acc = tgt.zero_elem(w, deg)?;
                for ((a, img), g) in coords.iter().zip(images).zip(degrees) {
                    if src.ring().is_zero(a) {
                        continue;
                    }
                    let b = phi.apply(a);
                    acc = tgt.add(&acc, &tgt.smul(w, &b, deg - g, img, *g)?)?;
                }
                Ok(acc)
            }
            CompMap::Degreewise(mats) => {
                if !w.contains(deg) {
                    return Err(Error::Window(deg, w.lo, w.hi));
                }
                let v = src.to_piece(w, x, deg)?;
                tgt.from_piece(w, deg, &mats[w.index(deg)].mul_vec(&v))
            }
        }
    }

    pub fn to_degreewise(
        &self,
        src: &CompModule,
        tgt: &CompModule,
        phi: &CompRingMap,
        w: Window,
    ) -> Result<Vec<QMatrix>> {
        if let CompMap::Degreewise(m) = self {
            return Ok(m.clone());
        }
        let sp = src.pieces(w)?;
        let tp = tgt.pieces(w)?;
        w.degrees()
            .map(|d| {
                let n = sp.dim(d);
                let cols = (0..n)
                    .map(|j| {
                        let x = src.from_piece(w, d, &unit_vec(n, j))?;
                        tgt.to_piece(w, &self.apply(src, tgt, phi, w, &x, d)?, d)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(QMatrix::from_cols(tp.dim(d), &cols))
            })
            .collect()
    }

    /// The canonical representation of a degreewise map.
    pub fn from_degreewise(
        src: &CompModule,
        tgt: &CompModule,
        mats: Vec<QMatrix>,
        w: Window,
    ) -> Result<CompMap> {
        match src.free_degrees() {
            None => Ok(CompMap::Degreewise(mats)),
            Some(degrees) => {
                let images = degrees
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| {
                        let x = src.basis_elem(i);
                        let v = src.to_piece(w, &x, d)?;
                        tgt.from_piece(w, d, &mats[w.index(d)].mul_vec(&v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompMap::Basis(images))
            }
        }
    }

    /// `g ∘ self` for `self: a → b` and `g: b → c` along `psi`.
    pub fn then(
        &self,
        g: &CompMap,
        a: &CompModule,
        b: &CompModule,
        c: &CompModule,
        psi: &CompRingMap,
        w: Window,
    ) -> Result<CompMap> {
        match self {
            CompMap::Basis(images) => {
                let degrees = a.free_degrees().expect("basis map from a free module");
                let out = images
                    .iter()
                    .zip(degrees)
                    .map(|(x, &d)| g.apply(b, c, psi, w, x, d))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompMap::Basis(out))
            }
            CompMap::Degreewise(f) => {
                let gm = g.to_degreewise(b, c, psi, w)?;
                Ok(CompMap::Degreewise(
                    gm.iter().zip(f).map(|(x, y)| x.mul(y)).collect(),
                ))
            }
        }
    }

    pub fn equals(
        &self,
        other: &CompMap,
        src: &CompModule,
        tgt: &CompModule,
        phi: &CompRingMap,
        w: Window,
    ) -> Result<bool> {
        match (self, other) {
            (CompMap::Basis(a), CompMap::Basis(b)) => {
                let degrees = src.free_degrees().expect("basis map from a free module");
                for ((x, y), &d) in a.iter().zip(b).zip(degrees) {
                    if !tgt.elem_eq(w, x, y, d)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(self.to_degreewise(src, tgt, phi, w)? == other.to_degreewise(src, tgt, phi, w)?),
        }
    }

    /// Shape, homogeneity and linearity over `phi`.
    pub fn check(
        &self,
        src: &CompModule,
        tgt: &CompModule,
        phi: &CompRingMap,
        w: Window,
    ) -> Result<()> {
        if phi.src() != src.ring() || phi.tgt() != tgt.ring() {
            return Err(Error::Construction(
                "module map over a mismatched ring map".into(),
            ));
        }
        match (self, src.backend()) {
            (CompMap::Basis(images), Backend::Free { degrees }) => {
                if images.len() != degrees.len() {
                    return Err(Error::Construction("wrong number of basis images".into()));
                }
                for (x, &d) in images.iter().zip(degrees) {
                    match (x, tgt.backend()) {
                        (Elem::Coords(c), Backend::Free { degrees: td }) => {
                            if c.len() != td.len() {
                                return Err(Error::Construction(
                                    "image has the wrong length".into(),
                                ));
                            }
                            for (a, t) in c.iter().zip(td) {
                                if !tgt.ring().is_zero(a) && tgt.ring().degree(a) != Some(d - t) {
                                    return Err(Error::Construction(format!(
                                        "image of a degree-{d} generator is not homogeneous"
                                    )));
                                }
                            }
                        }
                        (Elem::Piece(e, v), Backend::Pieces(p)) => {
                            if *e != d || v.len() != p.dim(d) {
                                return Err(Error::Construction(
                                    "image piece has the wrong degree or size".into(),
                                ));
                            }
                        }
                        _ => {
                            return Err(Error::Construction(
                                "image does not match the target backend".into(),
                            ))
                        }
                    }
                }
                Ok(())
            }
            (CompMap::Degreewise(mats), Backend::Pieces(sp)) => {
                let tp = tgt.pieces(w)?;
                if mats.len() != w.len() {
                    return Err(Error::Construction(
                        "degreewise map does not cover the window".into(),
                    ));
                }
                for d in w.degrees() {
                    let m = &mats[w.index(d)];
                    if m.rows() != tp.dim(d) || m.cols() != sp.dim(d) {
                        return Err(Error::Construction(format!(
                            "degreewise map has wrong shape in degree {d}"
                        )));
                    }
                }
                for v in 0..src.ring().nvars() {
                    let a = phi.apply(&src.ring().var(v));
                    for d in w.degrees() {
                        if d + 2 > w.hi {
                            continue;
                        }
                        let lhs = mats[w.index(d + 2)].mul(sp.action(v, d));
                        let rhs = action_matrix(tgt.ring(), &tp, &a, 2, d)?.mul(&mats[w.index(d)]);
                        if lhs != rhs {
                            return Err(Error::Construction(format!(
                                "map is not linear in degree {d}"
                            )));
                        }
                    }
                }
                Ok(())
            }
            _ => Err(Error::Construction(
                "map representation does not match the source backend".into(),
            )),
        }
    }

    /// `None` when the map (over the identity of one ring) is an
    /// isomorphism, otherwise a reason.
    pub fn iso_defect(
        &self,
        src: &CompModule,
        tgt: &CompModule,
        w: Window,
    ) -> Result<Option<String>> {
        let ring = src.ring();
        if let (CompMap::Basis(images), Some(sd), Some(td)) =
            (self, src.free_degrees(), tgt.free_degrees())
        {
            if sd.len() != td.len() {
                return Ok(Some(format!("ranks {} and {} differ", sd.len(), td.len())));
            }
            let m = coord_matrix(images);
            let dt = det(ring, &m);
            if !ring.is_unit(&dt) {
                return Ok(Some(format!(
                    "determinant {} is not a unit",
                    ring.render(&dt)
                )));
            }
            return Ok(None);
        }
        let id = CompRingMap::identity(ring);
        let mats = self.to_degreewise(src, tgt, &id, w)?;
        for d in w.degrees() {
            let m = &mats[w.index(d)];
            if !m.is_invertible() {
                return Ok(Some(format!(
                    "degree {d}: {}×{} of rank {}",
                    m.rows(),
                    m.cols(),
                    m.rank()
                )));
            }
        }
        Ok(None)
    }

    /// Inverse of an isomorphism over the identity ring map.
    pub fn inverse(&self, src: &CompModule, tgt: &CompModule, w: Window) -> Result<CompMap> {
        let ring = src.ring();
        if let (CompMap::Basis(images), Some(sd), Some(td)) =
            (self, src.free_degrees(), tgt.free_degrees())
        {
            if sd.len() != td.len() {
                return Err(Error::Precondition(
                    "inverting a map between free modules of different rank".into(),
                ));
            }
            let m = coord_matrix(images);
            let dt = det(ring, &m);
            let dinv = ring.inverse(&dt).ok_or_else(|| {
                Error::Precondition(format!("determinant {} is not a unit", ring.render(&dt)))
            })?;
            let n = m.len();
            // images[i] is column i; the inverse sends target basis j to column j of adj/det
            let cols = (0..n)
                .map(|j| {
                    Elem::Coords(
                        (0..n)
                            .map(|i| {
                                let cof = det(ring, &minor(&m, j, i));
                                let cof = if (i + j) % 2 == 0 {
                                    cof
                                } else {
                                    ring.neg(&cof)
                                };
                                ring.mul(&cof, &dinv)
                            })
                            .collect(),
                    )
                })
                .collect();
            return Ok(CompMap::Basis(cols));
        }
        let id = CompRingMap::identity(ring);
        let mats = self.to_degreewise(src, tgt, &id, w)?;
        let inv = mats
            .iter()
            .enumerate()
            .map(|(k, m)| {
                m.inverse().ok_or_else(|| {
                    Error::Precondition(format!(
                        "map is not invertible in degree {}",
                        w.lo + k as i64
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CompMap::from_degreewise(tgt, src, inv, w)
    }
}

/// Row `j`, column `i`: coordinate `j` of the image of basis element `i`.
fn coord_matrix(images: &[Elem]) -> Vec<Vec<Fraction>> {
    let cols: Vec<&Vec<Fraction>> = images
        .iter()
        .map(|x| match x {
            Elem::Coords(c) => c,
            Elem::Piece(..) => panic!("coordinate matrix of a windowed image"),
        })
        .collect();
    let n = cols.first().map(|c| c.len()).unwrap_or(0);
    (0..n)
        .map(|j| cols.iter().map(|c| c[j].clone()).collect())
        .collect()
}

/// `S ⊗_R M` for `phi: R → S`, computed deterministically from the chosen
/// generators of `M`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: CompModule,
    gens: Vec<(i64, Elem)>,
    pres: Option<Presentation>,
    /// Free cover over `S` and the projection onto the quotient, for
    /// extensions that keep relations.
    quotient: Option<(Vec<i64>, Vec<QMatrix>, Vec<Vec<usize>>)>,
}

impl Extension {
    pub fn new(m: &CompModule, phi: &CompRingMap, w: Window) -> Result<Self> {
        let s = phi.tgt().clone();
        if phi.src() != m.ring() {
            return Err(Error::Construction(
                "extending along a ring map from another ring".into(),
            ));
        }
        match m.backend() {
            Backend::Free { degrees } => Ok(Extension {
                module: CompModule::free(s, degrees.clone()),
                gens: degrees
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (d, m.basis_elem(i)))
                    .collect(),
                pres: None,
                quotient: None,
            }),
            Backend::Pieces(p) => {
                let pres = p.presentation(m.ring())?;
                let gens: Vec<(i64, Elem)> = pres
                    .gens
                    .iter()
                    .map(|(d, v)| (*d, Elem::Piece(*d, v.clone())))
                    .collect();
                let degrees = pres.gen_degrees();
                if pres.rels.is_empty() {
                    return Ok(Extension {
                        module: CompModule::free(s, degrees),
                        gens,
                        pres: Some(pres),
                        quotient: None,
                    });
                }
                if !s.is_finite_type() {
                    return Err(Error::Unsupported(format!(
                        "extending a module with relations to {}",
                        s.describe()
                    )));
                }
                let cover = CompModule::free(s.clone(), degrees.clone());
                let free = Pieces::free(&s, w, &degrees);
                let mut spaces: Vec<Vec<QVec>> = vec![Vec::new(); w.len()];
                for (rd, rel) in &pres.rels {
                    let image = Elem::Coords(rel.iter().map(|a| phi.apply(a)).collect());
                    for d in w.degrees() {
                        for mono in s.basis(d - rd) {
                            let x = cover.smul(w, &s.mono(&mono), d - rd, &image, *rd)?;
                            spaces[w.index(d)].push(cover.to_piece(w, &x, d)?);
                        }
                    }
                }
                let (q, proj) = free.quotient(&s, &spaces)?;
                let free_cols = w
                    .degrees()
                    .map(|d| {
                        let mut e = crate::ring::Echelon::new(free.dim(d));
                        for v in &spaces[w.index(d)] {
                            e.insert(v.clone());
                        }
                        e.free_columns()
                    })
                    .collect();
                Ok(Extension {
                    module: CompModule::from_pieces(s, q)?,
                    gens,
                    pres: Some(pres),
                    quotient: Some((degrees, proj, free_cols)),
                })
            }
        }
    }

    pub fn generators(&self) -> &[(i64, Elem)] {
        &self.gens
    }

    /// The unit `M → S ⊗_R M`, `x ↦ 1 ⊗ x`.
    pub fn unit(&self, m: &CompModule, phi: &CompRingMap, w: Window) -> Result<CompMap> {
        let s = phi.tgt();
        match m.backend() {
            Backend::Free { degrees } => Ok(CompMap::Basis(
                (0..degrees.len())
                    .map(|i| self.module.basis_elem(i))
                    .collect(),
            )),
            Backend::Pieces(p) => {
                if !s.is_finite_type() {
                    return Err(Error::Unsupported(format!(
                        "unit map into a module over {}",
                        s.describe()
                    )));
                }
                let pres = self
                    .pres
                    .as_ref()
                    .expect("windowed source has a presentation");
                let degrees = pres.gen_degrees();
                let cover = CompModule::free(s.clone(), degrees);
                let mats = w
                    .degrees()
                    .map(|d| {
                        let n = p.dim(d);
                        let cols = (0..n)
                            .map(|j| {
                                let r = p.express(m.ring(), pres, d, &unit_vec(n, j))?;
                                let img = Elem::Coords(r.iter().map(|a| phi.apply(a)).collect());
                                let v = cover.to_piece(w, &img, d)?;
                                Ok(match &self.quotient {
                                    Some((_, proj, _)) => proj[w.index(d)].mul_vec(&v),
                                    None => v,
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(QMatrix::from_cols(self.module.dim(w, d)?, &cols))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompMap::Degreewise(mats))
            }
        }
    }

    /// The map `S ⊗_R M → N` along `psi: S → T` determined by a map
    /// `f: M → N` along `psi ∘ phi`: `ε_i ↦ f(g_i)`.
    #[allow(clippy::too_many_arguments)]
    pub fn induced(
        &self,
        m: &CompModule,
        n: &CompModule,
        phi: &CompRingMap,
        psi: &CompRingMap,
        f: &CompMap,
        w: Window,
    ) -> Result<CompMap> {
        let composite = phi.then(psi)?;
        let images = self
            .gens
            .iter()
            .map(|(d, g)| f.apply(m, n, &composite, w, g, *d))
            .collect::<Result<Vec<_>>>()?;
        match &self.quotient {
            None => Ok(CompMap::Basis(images)),
            Some((degrees, _, free_cols)) => {
                let s = phi.tgt();
                let np = n.pieces(w)?;
                let mats = w
                    .degrees()
                    .map(|d| {
                        let basis = Pieces::free_basis(s, degrees, d);
                        let cols = free_cols[w.index(d)]
                            .iter()
                            .map(|&j| {
                                let (i, mono) = &basis[j];
                                let gd = degrees[*i];
                                let a = psi.apply(&s.mono(mono));
                                let v = n.to_piece(w, &images[*i], gd)?;
                                np.act(n.ring(), &a, d - gd, gd, &v)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(QMatrix::from_cols(np.dim(d), &cols))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CompMap::Degreewise(mats))
            }
        }
    }
}

/// Whether `x = 1_R` times generator data, used by tests.
pub fn is_unit_scalar(ring: &CompRing, a: &Fraction) -> bool {
    ring.unit_decomposition(a)
        .is_some_and(|(c, e)| c.is_one() && e.iter().all(|x| x.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::{q, Poly};

    #[test]
    fn free_iso_by_determinant() {
        let r = CompRing::localized(2, &[Poly::var(2, 0)]).unwrap();
        let id = CompRingMap::identity(&r);
        let w = Window::default();
        let m = CompModule::free(r.clone(), vec![0, 2]);
        let f = CompMap::Basis(vec![
            Elem::Coords(vec![r.one(), r.zero()]),
            Elem::Coords(vec![r.var(1), r.constant(q(3))]),
        ]);
        f.check(&m, &m, &id, w).unwrap();
        assert!(f.iso_defect(&m, &m, w).unwrap().is_none());
        let g = f.inverse(&m, &m, w).unwrap();
        let comp = f.then(&g, &m, &m, &m, &id, w).unwrap();
        assert!(comp
            .equals(&CompMap::identity(&m, w).unwrap(), &m, &m, &id, w)
            .unwrap());

        // multiplication by an inverted form is invertible, by another is not
        let a = CompModule::free(r.clone(), vec![0]);
        let b = CompModule::free(r.clone(), vec![-2]);
        let by_x = CompMap::Basis(vec![Elem::Coords(vec![r.var(0)])]);
        let by_y = CompMap::Basis(vec![Elem::Coords(vec![r.var(1)])]);
        by_x.check(&a, &b, &id, w).unwrap();
        assert!(by_x.iso_defect(&a, &b, w).unwrap().is_none());
        assert!(by_y.iso_defect(&a, &b, w).unwrap().is_some());
        let inv = by_x.inverse(&a, &b, w).unwrap();
        let back = inv.then(&by_x, &b, &a, &b, &id, w).unwrap();
        assert!(back
            .equals(&CompMap::identity(&b, w).unwrap(), &b, &b, &id, w)
            .unwrap());
    }

    #[test]
    fn torsion_dies_after_localization() {
        let r = CompRing::polynomial(1);
        let w = Window::new(-4, 12).unwrap();
        let free = Pieces::free(&r, w, &[0]);
        let spaces: Vec<Vec<QVec>> = w
            .degrees()
            .map(|d| {
                if d >= 4 && free.dim(d) > 0 {
                    vec![vec![q(1)]]
                } else {
                    vec![]
                }
            })
            .collect();
        let (t, _) = free.quotient(&r, &spaces).unwrap();
        let m = CompModule::from_pieces(r.clone(), t).unwrap();
        let s = r.localize(&[Poly::var(1, 0)]).unwrap();
        let phi = CompRingMap::localization(&r, &s).unwrap();
        let ext = Extension::new(&m, &phi, w).unwrap();
        assert!(ext.module.is_zero());
        let id_r = CompRingMap::identity(&r);
        let ext_id = Extension::new(&m, &id_r, w).unwrap();
        let u = ext_id.unit(&m, &id_r, w).unwrap();
        assert!(u.iso_defect(&m, &ext_id.module, w).unwrap().is_none());
    }
}
