//! Windowed graded pieces of modules over finite-type component rings.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::ring::linalg::{is_zero_vec, unit_vec, zero_vec};
use crate::ring::{CompRing, Echelon, Fraction, Mono, QMatrix, QVec, Q};

/// Inclusive range of cohomological degrees inspected by windowed checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return precondition(format!("empty degree window {lo}..{hi}"));
        }
        Ok(Window { lo, hi })
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, d: i64) -> usize {
        debug_assert!(self.contains(d));
        (d - self.lo) as usize
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -20, hi: 40 }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once("..").ok_or_else(|| {
            Error::Precondition(format!("window `{s}` is not of the form LO..HI"))
        })?;
        let lo = a
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("bad window bound `{a}`")))?;
        let hi = b
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("bad window bound `{b}`")))?;
        Window::new(lo, hi)
    }
}

/// Degreewise data of a graded module: the dimension of each piece in the
/// window together with the action of every ring variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pieces {
    window: Window,
    dims: Vec<usize>,
    /// `actions[v][d - lo]` maps `M_d → M_{d+2}`; it has no rows when
    /// `d + 2` leaves the window.
    actions: Vec<Vec<QMatrix>>,
}

/// Minimal generators and relations read off from the pieces, bottom-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gens: Vec<(i64, QVec)>,
    pub rels: Vec<(i64, Vec<Fraction>)>,
}

impl Presentation {
    pub fn gen_degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|(d, _)| *d).collect()
    }
}

impl Pieces {
    pub fn new(
        ring: &CompRing,
        window: Window,
        dims: Vec<usize>,
        actions: Vec<Vec<QMatrix>>,
    ) -> Result<Self> {
        if !ring.is_finite_type() {
            return Err(Error::Unsupported(format!(
                "windowed pieces over {}",
                ring.describe()
            )));
        }
        if dims.len() != window.len() || actions.len() != ring.nvars() {
            return Err(Error::Construction(
                "pieces do not match the window or ring".into(),
            ));
        }
        let p = Pieces {
            window,
            dims,
            actions,
        };
        for v in 0..ring.nvars() {
            if p.actions[v].len() != window.len() {
                return Err(Error::Construction(
                    "action list does not cover the window".into(),
                ));
            }
            for d in window.degrees() {
                let m = &p.actions[v][window.index(d)];
                if m.cols() != p.dim(d) || m.rows() != p.dim_or_zero(d + 2) {
                    return Err(Error::Construction(format!(
                        "action of variable {v} in degree {d} has wrong shape"
                    )));
                }
            }
        }
        for a in 0..ring.nvars() {
            for b in a + 1..ring.nvars() {
                for d in window.degrees() {
                    if d + 4 > window.hi {
                        break;
                    }
                    let ab = p.action(a, d + 2).mul(p.action(b, d));
                    let ba = p.action(b, d + 2).mul(p.action(a, d));
                    if ab != ba {
                        return Err(Error::Construction(format!(
                            "variables {a} and {b} do not commute in degree {d}"
                        )));
                    }
                }
            }
        }
        if ring.is_laurent() {
            for d in window.degrees() {
                if d + 2 <= window.hi && !p.action(0, d).is_invertible() {
                    return Err(Error::Construction(format!(
                        "the inverted variable does not act invertibly in degree {d}"
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn zero(ring: &CompRing, window: Window) -> Self {
        Pieces {
            window,
            dims: vec![0; window.len()],
            actions: vec![vec![QMatrix::zeros(0, 0); window.len()]; ring.nvars()],
        }
    }

    /// Basis of the degree-`d` piece of the free module on `degrees`.
    pub fn free_basis(ring: &CompRing, degrees: &[i64], d: i64) -> Vec<(usize, Mono)> {
        let mut out = Vec::new();
        for (i, &g) in degrees.iter().enumerate() {
            for m in ring.basis(d - g) {
                out.push((i, m));
            }
        }
        out
    }

    pub fn free(ring: &CompRing, window: Window, degrees: &[i64]) -> Self {
        let bases: Vec<Vec<(usize, Mono)>> = window
            .degrees()
            .map(|d| Self::free_basis(ring, degrees, d))
            .collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut actions = Vec::with_capacity(ring.nvars());
        for v in 0..ring.nvars() {
            let mut per = Vec::with_capacity(window.len());
            for d in window.degrees() {
                let src = &bases[window.index(d)];
                if d + 2 > window.hi {
                    per.push(QMatrix::zeros(0, src.len()));
                    continue;
                }
                let tgt = &bases[window.index(d + 2)];
                let mut m = QMatrix::zeros(tgt.len(), src.len());
                for (j, (i, mono)) in src.iter().enumerate() {
                    let mut up = mono.clone();
                    up[v] += 1;
                    let row = tgt
                        .iter()
                        .position(|(i2, m2)| i2 == i && *m2 == up)
                        .expect("shifted monomial is a basis element");
                    m.set(row, j, Q::from_integer(1.into()));
                }
                per.push(m);
            }
            actions.push(per);
        }
        Pieces {
            window,
            dims,
            actions,
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dim_or_zero(d)
    }

    fn dim_or_zero(&self, d: i64) -> usize {
        if self.window.contains(d) {
            self.dims[self.window.index(d)]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Multiplication by variable `v` from degree `d`.
    pub fn action(&self, v: usize, d: i64) -> &QMatrix {
        &self.actions[v][self.window.index(d)]
    }

    /// Multiplication by a monomial from degree `d`, or `None` when the
    /// target degree leaves the window.
    pub fn mono_action(&self, m: &Mono, d: i64) -> Option<QMatrix> {
        let shift: i64 = 2 * m.iter().map(|&e| e as i64).sum::<i64>();
        if !self.window.contains(d) || !self.window.contains(d + shift) {
            return None;
        }
        let mut acc = QMatrix::identity(self.dim(d));
        let mut cur = d;
        for (v, &e) in m.iter().enumerate() {
            if e >= 0 {
                for _ in 0..e {
                    acc = self.action(v, cur).mul(&acc);
                    cur += 2;
                }
            } else {
                for _ in 0..(-e) {
                    let inv = self
                        .action(v, cur - 2)
                        .inverse()
                        .expect("Laurent action is invertible");
                    acc = inv.mul(&acc);
                    cur -= 2;
                }
            }
        }
        Some(acc)
    }

    /// `a · x` for `x` in degree `d` and `a` homogeneous of degree `deg_a`.
    pub fn act(&self, ring: &CompRing, a: &Fraction, deg_a: i64, d: i64, x: &[Q]) -> Result<QVec> {
        let t = d + deg_a;
        if !self.window.contains(t) {
            return Err(Error::Window(t, self.window.lo, self.window.hi));
        }
        let mut out = zero_vec(self.dim(t));
        if ring.is_zero(a) || is_zero_vec(x) {
            return Ok(out);
        }
        let basis = ring.basis(deg_a);
        let coords = ring.coords(a, deg_a)?;
        for (m, c) in basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            let op =
                self.mono_action(m, d)
                    .ok_or(Error::Window(t, self.window.lo, self.window.hi))?;
            for (o, y) in out.iter_mut().zip(op.mul_vec(x)) {
                *o += &c * y;
            }
        }
        Ok(out)
    }

    /// Whether the given subspaces are closed under the variable actions.
    pub fn is_stable(&self, spaces: &[Vec<QVec>]) -> bool {
        let ech: Vec<Echelon> = self
            .window
            .degrees()
            .map(|d| {
                let mut e = Echelon::new(self.dim(d));
                for v in &spaces[self.window.index(d)] {
                    e.insert(v.clone());
                }
                e
            })
            .collect();
        for v in 0..self.actions.len() {
            for d in self.window.degrees() {
                if d + 2 > self.window.hi {
                    continue;
                }
                let a = self.action(v, d);
                for x in &spaces[self.window.index(d)] {
                    if !ech[self.window.index(d + 2)].contains(&a.mul_vec(x)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The submodule spanned degreewise by `spaces` (assumed stable), with
    /// its inclusion.
    pub fn sub(&self, ring: &CompRing, spaces: &[Vec<QVec>]) -> Result<(Pieces, Vec<QMatrix>)> {
        let mut bases: Vec<Vec<QVec>> = Vec::with_capacity(self.window.len());
        for d in self.window.degrees() {
            let mut e = Echelon::new(self.dim(d));
            for v in &spaces[self.window.index(d)] {
                e.insert(v.clone());
            }
            bases.push(e.rows().to_vec());
        }
        if !self.is_stable(&bases) {
            return Err(Error::Construction(
                "subspaces are not closed under the ring action".into(),
            ));
        }
        let incl: Vec<QMatrix> = self
            .window
            .degrees()
            .map(|d| QMatrix::from_cols(self.dim(d), &bases[self.window.index(d)]))
            .collect();
        let dims = bases.iter().map(|b| b.len()).collect();
        let mut actions = Vec::with_capacity(ring.nvars());
        for v in 0..ring.nvars() {
            let mut per = Vec::with_capacity(self.window.len());
            for d in self.window.degrees() {
                let src = &bases[self.window.index(d)];
                if d + 2 > self.window.hi {
                    per.push(QMatrix::zeros(0, src.len()));
                    continue;
                }
                let tgt = &incl[self.window.index(d + 2)];
                let a = self.action(v, d);
                let cols: Vec<QVec> = src
                    .iter()
                    .map(|x| tgt.solve(&a.mul_vec(x)).expect("stable subspace"))
                    .collect();
                per.push(QMatrix::from_cols(tgt.cols(), &cols));
            }
            actions.push(per);
        }
        Ok((
            Pieces {
                window: self.window,
                dims,
                actions,
            },
            incl,
        ))
    }

    /// Kernel of a degreewise map to another module, with its inclusion.
    pub fn kernel(&self, ring: &CompRing, map: &[QMatrix]) -> Result<(Pieces, Vec<QMatrix>)> {
        let spaces: Vec<Vec<QVec>> = self
            .window
            .degrees()
            .map(|d| {
                let m = &map[self.window.index(d)];
                if m.rows() == 0 {
                    (0..self.dim(d)).map(|j| unit_vec(self.dim(d), j)).collect()
                } else {
                    m.kernel()
                }
            })
            .collect();
        self.sub(ring, &spaces)
    }

    /// Quotient by stable subspaces; representatives are the non-pivot unit
    /// vectors. Returns the quotient and the projection.
    pub fn quotient(
        &self,
        ring: &CompRing,
        spaces: &[Vec<QVec>],
    ) -> Result<(Pieces, Vec<QMatrix>)> {
        let ech: Vec<Echelon> = self
            .window
            .degrees()
            .map(|d| {
                let mut e = Echelon::new(self.dim(d));
                for v in &spaces[self.window.index(d)] {
                    e.insert(v.clone());
                }
                e
            })
            .collect();
        let free: Vec<Vec<usize>> = ech.iter().map(|e| e.free_columns()).collect();
        let project = |d: i64, x: &[Q]| -> QVec {
            let r = ech[self.window.index(d)].reduce(x);
            free[self.window.index(d)]
                .iter()
                .map(|&j| r[j].clone())
                .collect()
        };
        let proj: Vec<QMatrix> = self
            .window
            .degrees()
            .map(|d| {
                let n = self.dim(d);
                let cols: Vec<QVec> = (0..n).map(|j| project(d, &unit_vec(n, j))).collect();
                QMatrix::from_cols(free[self.window.index(d)].len(), &cols)
            })
            .collect();
        let dims = free.iter().map(|f| f.len()).collect();
        let mut actions = Vec::with_capacity(ring.nvars());
        for v in 0..ring.nvars() {
            let mut per = Vec::with_capacity(self.window.len());
            for d in self.window.degrees() {
                let fr = &free[self.window.index(d)];
                if d + 2 > self.window.hi {
                    per.push(QMatrix::zeros(0, fr.len()));
                    continue;
                }
                let a = self.action(v, d);
                let cols: Vec<QVec> = fr.iter().map(|&j| project(d + 2, &a.col(j))).collect();
                per.push(QMatrix::from_cols(
                    free[self.window.index(d + 2)].len(),
                    &cols,
                ));
            }
            actions.push(per);
        }
        Ok((
            Pieces {
                window: self.window,
                dims,
                actions,
            },
            proj,
        ))
    }

    pub fn direct_sum(ring: &CompRing, window: Window, parts: &[&Pieces]) -> Pieces {
        let dims = window
            .degrees()
            .map(|d| parts.iter().map(|p| p.dim(d)).sum())
            .collect();
        let actions = (0..ring.nvars())
            .map(|v| {
                window
                    .degrees()
                    .map(|d| {
                        let blocks: Vec<QMatrix> =
                            parts.iter().map(|p| p.action(v, d).clone()).collect();
                        QMatrix::block_diag(&blocks)
                    })
                    .collect()
            })
            .collect();
        Pieces {
            window,
            dims,
            actions,
        }
    }

    /// Minimal presentation. Over a polynomial ring generators are chosen
    /// bottom-up as non-pivot unit vectors complementing the image of lower
    /// degrees; over `ℚ` and the Laurent ring the module is free on the
    /// bottom pieces.
    pub fn presentation(&self, ring: &CompRing) -> Result<Presentation> {
        let w = self.window;
        if ring.nvars() == 0 {
            let gens = w
                .degrees()
                .flat_map(|d| (0..self.dim(d)).map(move |j| (d, j)))
                .map(|(d, j)| (d, unit_vec(self.dim(d), j)))
                .collect();
            return Ok(Presentation {
                gens,
                rels: Vec::new(),
            });
        }
        if ring.is_laurent() {
            let gens = [w.lo, w.lo + 1]
                .into_iter()
                .filter(|&d| w.contains(d))
                .flat_map(|d| (0..self.dim(d)).map(move |j| (d, j)))
                .map(|(d, j)| (d, unit_vec(self.dim(d), j)))
                .collect();
            return Ok(Presentation {
                gens,
                rels: Vec::new(),
            });
        }
        let mut gens: Vec<(i64, QVec)> = Vec::new();
        for d in w.degrees() {
            let mut e = Echelon::new(self.dim(d));
            if d - 2 >= w.lo {
                for v in 0..ring.nvars() {
                    let a = self.action(v, d - 2);
                    for j in 0..a.cols() {
                        e.insert(a.col(j));
                    }
                }
            }
            for j in e.free_columns() {
                gens.push((d, unit_vec(self.dim(d), j)));
            }
        }
        let degrees: Vec<i64> = gens.iter().map(|(d, _)| *d).collect();
        let free = Pieces::free(ring, w, &degrees);
        let mut rels = Vec::new();
        let mut kernels: Vec<Vec<QVec>> = Vec::with_capacity(w.len());
        for d in w.degrees() {
            let basis = Self::free_basis(ring, &degrees, d);
            let eval = self.eval_matrix(&gens, &basis, d);
            let kernel = if basis.is_empty() {
                Vec::new()
            } else {
                eval.kernel()
            };
            let mut lower = Echelon::new(basis.len());
            if d - 2 >= w.lo {
                for v in 0..ring.nvars() {
                    let a = free.action(v, d - 2);
                    for k in &kernels[w.index(d - 2)] {
                        lower.insert(a.mul_vec(k));
                    }
                }
            }
            for k in &kernel {
                if lower.insert(k.clone()) {
                    rels.push((d, Self::coords_to_elems(ring, &basis, k, degrees.len())));
                }
            }
            kernels.push(kernel);
        }
        Ok(Presentation { gens, rels })
    }

    /// Columns: images of the free basis `(i, m) ↦ m · gen_i` in degree `d`.
    fn eval_matrix(&self, gens: &[(i64, QVec)], basis: &[(usize, Mono)], d: i64) -> QMatrix {
        let cols: Vec<QVec> = basis
            .iter()
            .map(|(i, m)| {
                let (gd, gv) = &gens[*i];
                self.mono_action(m, *gd)
                    .expect("monomial stays in the window")
                    .mul_vec(gv)
            })
            .collect();
        QMatrix::from_cols(self.dim(d), &cols)
    }

    fn coords_to_elems(
        ring: &CompRing,
        basis: &[(usize, Mono)],
        x: &[Q],
        n: usize,
    ) -> Vec<Fraction> {
        let mut out = vec![ring.zero(); n];
        for ((i, m), c) in basis.iter().zip(x) {
            if !c.is_zero() {
                out[*i] = ring.add(&out[*i], &ring.scale(&ring.mono(m), c));
            }
        }
        out
    }

    /// Coefficients `r_i` with `x = Σ r_i · gen_i`, for `x` in degree `d`.
    pub fn express(
        &self,
        ring: &CompRing,
        pres: &Presentation,
        d: i64,
        x: &[Q],
    ) -> Result<Vec<Fraction>> {
        let degrees = pres.gen_degrees();
        let basis = Self::free_basis(ring, &degrees, d);
        let eval = self.eval_matrix(&pres.gens, &basis, d);
        let sol = if basis.is_empty() {
            if is_zero_vec(x) {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            eval.solve(x)
        };
        let sol = sol.ok_or_else(|| {
            Error::Construction(format!("element of degree {d} is not generated"))
        })?;
        Ok(Self::coords_to_elems(ring, &basis, &sol, degrees.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;

    fn torsion(len: usize) -> (CompRing, Pieces) {
        let r = CompRing::polynomial(1);
        let w = Window::new(-4, 12).unwrap();
        let free = Pieces::free(&r, w, &[0]);
        let spaces: Vec<Vec<QVec>> = w
            .degrees()
            .map(|d| {
                if d >= 2 * len as i64 && free.dim(d) > 0 {
                    vec![vec![q(1)]]
                } else {
                    vec![]
                }
            })
            .collect();
        let (m, _) = free.quotient(&r, &spaces).unwrap();
        (r, m)
    }

    #[test]
    fn truncated_polynomial_presentation() {
        let (r, m) = torsion(2);
        assert_eq!(m.dim(0), 1);
        assert_eq!(m.dim(2), 1);
        assert_eq!(m.dim(4), 0);
        let p = m.presentation(&r).unwrap();
        assert_eq!(p.gen_degrees(), vec![0]);
        assert_eq!(p.rels.len(), 1);
        assert_eq!(p.rels[0].0, 4);
    }

    #[test]
    fn free_pieces_express() {
        let r = CompRing::polynomial(2);
        let w = Window::new(0, 8).unwrap();
        let f = Pieces::free(&r, w, &[0, 2]);
        assert_eq!(f.dim(2), 3);
        let p = f.presentation(&r).unwrap();
        assert_eq!(p.gens.len(), 2);
        assert!(p.rels.is_empty());
        let x = vec![q(1), q(2), q(3)];
        let c = f.express(&r, &p, 2, &x).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn window_parse() {
        let w: Window = "-2..6".parse().unwrap();
        assert_eq!(w, Window::new(-2, 6).unwrap());
        assert!("3..1".parse::<Window>().is_err());
    }
}
