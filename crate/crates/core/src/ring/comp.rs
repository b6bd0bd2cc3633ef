//! Graded domains `ℚ[x₁,…,x_n][1/t₁,…,1/t_k]` with the `t_j` linear forms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{monomials_of_degree, Poly, Q};
use crate::error::{Error, Result};

/// A polynomial ring localized at finitely many normalized linear forms.
/// Every such ring is a graded domain, so each nonzero element is a
/// nonzerodivisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompRing {
    nvars: usize,
    inverted: Vec<Poly>,
}

/// `num / ∏ inverted[i]^den[i]`, kept reduced: no inverted form with positive
/// exponent divides the numerator. Reduced fractions are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    pub num: Poly,
    pub den: Vec<u32>,
}

/// Exponent vector of a basis monomial; negative entries occur only in the
/// one-variable Laurent ring.
pub type Mono = Vec<i32>;

impl CompRing {
    pub fn polynomial(nvars: usize) -> Self {
        CompRing {
            nvars,
            inverted: Vec::new(),
        }
    }

    pub fn localized(nvars: usize, forms: &[Poly]) -> Result<Self> {
        Self::polynomial(nvars).localize(forms)
    }

    /// Adds inverted linear forms (normalized to be monic).
    pub fn localize(&self, forms: &[Poly]) -> Result<CompRing> {
        let mut inv = self.inverted.clone();
        for f in forms {
            if f.nvars() != self.nvars {
                return Err(Error::Construction(
                    "inverted form has wrong variable count".into(),
                ));
            }
            if f.is_zero() {
                return Err(Error::Uncertified(
                    "the zero element cannot be inverted".into(),
                ));
            }
            if f.homogeneous_degree() != Some(1) {
                return Err(Error::Unsupported(format!(
                    "inverting a non-linear element ({} terms)",
                    f.terms().len()
                )));
            }
            let (_, m) = f.monic();
            if !inv.contains(&m) {
                inv.push(m);
            }
        }
        inv.sort();
        Ok(CompRing {
            nvars: self.nvars,
            inverted: inv,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn inverted(&self) -> &[Poly] {
        &self.inverted
    }

    /// Finitely many monomials in each degree: no inversions, or the Laurent
    /// ring in one variable.
    pub fn is_finite_type(&self) -> bool {
        self.inverted.is_empty() || self.nvars == 1
    }

    pub fn is_laurent(&self) -> bool {
        self.nvars == 1 && !self.inverted.is_empty()
    }

    pub fn is_localization_of(&self, other: &CompRing) -> bool {
        self.nvars == other.nvars && other.inverted.iter().all(|f| self.inverted.contains(f))
    }

    /// Monomial basis of the degree-`d` piece (finite-type rings), in a fixed
    /// order.
    pub fn basis(&self, degree: i64) -> Vec<Mono> {
        assert!(self.is_finite_type(), "infinite-dimensional graded pieces");
        if degree.rem_euclid(2) != 0 {
            return Vec::new();
        }
        let k = degree / 2;
        if self.is_laurent() {
            return vec![vec![k as i32]];
        }
        if k < 0 {
            return Vec::new();
        }
        monomials_of_degree(self.nvars, k as u32)
            .into_iter()
            .map(|e| e.into_iter().map(|x| x as i32).collect())
            .collect()
    }

    pub fn basis_index(&self, m: &Mono) -> Option<usize> {
        let d: i64 = 2 * m.iter().map(|&x| x as i64).sum::<i64>();
        self.basis(d).iter().position(|b| b == m)
    }

    pub fn zero(&self) -> Fraction {
        Fraction {
            num: Poly::zero(self.nvars),
            den: vec![0; self.inverted.len()],
        }
    }

    pub fn one(&self) -> Fraction {
        self.constant(Q::one())
    }

    pub fn constant(&self, c: Q) -> Fraction {
        Fraction {
            num: Poly::constant(self.nvars, c),
            den: vec![0; self.inverted.len()],
        }
    }

    pub fn var(&self, i: usize) -> Fraction {
        self.from_poly(Poly::var(self.nvars, i))
    }

    pub fn from_poly(&self, p: Poly) -> Fraction {
        assert_eq!(p.nvars(), self.nvars);
        self.reduce(Fraction {
            num: p,
            den: vec![0; self.inverted.len()],
        })
    }

    /// `num / ∏ inverted^den` with explicit exponents, reduced.
    pub fn fraction(&self, num: Poly, den: Vec<u32>) -> Fraction {
        assert_eq!(den.len(), self.inverted.len());
        self.reduce(Fraction { num, den })
    }

    pub fn mono(&self, m: &Mono) -> Fraction {
        let mut num = vec![0u32; self.nvars];
        let mut den = vec![0u32; self.inverted.len()];
        for (i, &e) in m.iter().enumerate() {
            if e >= 0 {
                num[i] = e as u32;
            } else {
                // the Laurent ring inverts its single variable
                den[0] = (-e) as u32;
            }
        }
        Fraction {
            num: Poly::monomial(num, Q::one()),
            den,
        }
    }

    fn reduce(&self, mut f: Fraction) -> Fraction {
        if f.num.is_zero() {
            return self.zero();
        }
        for (i, t) in self.inverted.iter().enumerate() {
            while f.den[i] > 0 {
                match f.num.div_exact(t) {
                    Some(q) => {
                        f.num = q;
                        f.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        f
    }

    fn lift(&self, f: &Fraction, to: &[u32]) -> Poly {
        let mut p = f.num.clone();
        for (i, t) in self.inverted.iter().enumerate() {
            p = p.mul(&t.pow(to[i] - f.den[i]));
        }
        p
    }

    pub fn add(&self, a: &Fraction, b: &Fraction) -> Fraction {
        let m: Vec<u32> = a.den.iter().zip(&b.den).map(|(x, y)| *x.max(y)).collect();
        let num = self.lift(a, &m).add(&self.lift(b, &m));
        self.reduce(Fraction { num, den: m })
    }

    pub fn neg(&self, a: &Fraction) -> Fraction {
        Fraction {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &Fraction, b: &Fraction) -> Fraction {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Fraction, b: &Fraction) -> Fraction {
        let den = a.den.iter().zip(&b.den).map(|(x, y)| x + y).collect();
        self.reduce(Fraction {
            num: a.num.mul(&b.num),
            den,
        })
    }

    pub fn scale(&self, a: &Fraction, c: &Q) -> Fraction {
        self.reduce(Fraction {
            num: a.num.scale(c),
            den: a.den.clone(),
        })
    }

    pub fn pow(&self, a: &Fraction, n: u32) -> Fraction {
        let mut r = self.one();
        for _ in 0..n {
            r = self.mul(&r, a);
        }
        r
    }

    /// Cross-multiplication equality.
    pub fn equal(&self, a: &Fraction, b: &Fraction) -> bool {
        let m: Vec<u32> = a.den.iter().zip(&b.den).map(|(x, y)| *x.max(y)).collect();
        self.lift(a, &m) == self.lift(b, &m)
    }

    pub fn is_zero(&self, a: &Fraction) -> bool {
        a.num.is_zero()
    }

    /// Writes a unit as `λ · ∏ t_i^{e_i}` (exponents may be negative).
    pub fn unit_decomposition(&self, a: &Fraction) -> Option<(Q, Vec<i64>)> {
        if a.num.is_zero() {
            return None;
        }
        let mut p = a.num.clone();
        let mut exps: Vec<i64> = a.den.iter().map(|&d| -(d as i64)).collect();
        for (i, t) in self.inverted.iter().enumerate() {
            while let Some(q) = p.div_exact(t) {
                p = q;
                exps[i] += 1;
            }
        }
        match p.constant_value() {
            Some(c) if !c.is_zero() => Some((c, exps)),
            _ => None,
        }
    }

    pub fn is_unit(&self, a: &Fraction) -> bool {
        self.unit_decomposition(a).is_some()
    }

    pub fn inverse(&self, a: &Fraction) -> Option<Fraction> {
        let (c, exps) = self.unit_decomposition(a)?;
        Some(self.unit_from(
            &(Q::one() / c),
            &exps.iter().map(|e| -e).collect::<Vec<_>>(),
        ))
    }

    /// `λ · ∏ t_i^{e_i}`.
    pub fn unit_from(&self, lambda: &Q, exps: &[i64]) -> Fraction {
        let mut num = Poly::constant(self.nvars, lambda.clone());
        let mut den = vec![0u32; self.inverted.len()];
        for (i, &e) in exps.iter().enumerate() {
            if e >= 0 {
                num = num.mul(&self.inverted[i].pow(e as u32));
            } else {
                den[i] = (-e) as u32;
            }
        }
        self.reduce(Fraction { num, den })
    }

    /// Cohomological degree of a nonzero homogeneous element.
    pub fn degree(&self, a: &Fraction) -> Option<i64> {
        let d = a.num.homogeneous_degree()? as i64;
        Some(2 * (d - a.den.iter().map(|&x| x as i64).sum::<i64>()))
    }

    /// Coordinates of a homogeneous element of degree `d` in `basis(d)`.
    pub fn coords(&self, a: &Fraction, degree: i64) -> Result<Vec<Q>> {
        let basis = self.basis(degree);
        let mut out = vec![Q::zero(); basis.len()];
        if a.num.is_zero() {
            return Ok(out);
        }
        for (e, c) in a.num.terms() {
            let mut m: Mono = e.iter().map(|&x| x as i32).collect();
            if self.is_laurent() {
                m[0] -= a.den[0] as i32;
            } else if a.den.iter().any(|&x| x > 0) {
                return Err(Error::Unsupported(
                    "denominator in a finite-type ring".into(),
                ));
            }
            let Some(i) = basis.iter().position(|b| *b == m) else {
                return Err(Error::Precondition(format!(
                    "element is not homogeneous of degree {degree}"
                )));
            };
            out[i] += c;
        }
        Ok(out)
    }

    /// The element `Σ coords[i] · basis(d)[i]`.
    pub fn from_coords(&self, coords: &[Q], degree: i64) -> Fraction {
        let basis = self.basis(degree);
        let mut acc = self.zero();
        for (c, m) in coords.iter().zip(&basis) {
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale(&self.mono(m), c));
            }
        }
        acc
    }

    pub fn var_names(&self) -> Vec<String> {
        match self.nvars {
            1 => vec!["c".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            n => (0..n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn render(&self, a: &Fraction) -> String {
        let names = self.var_names();
        let num = a.num.render(&names);
        let dens: Vec<String> = a
            .den
            .iter()
            .zip(&self.inverted)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, t)| {
                let base = format!("({})", t.render(&names));
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if dens.is_empty() {
            num
        } else {
            format!("({num})/{}", dens.join("*"))
        }
    }

    pub fn describe(&self) -> String {
        let names = self.var_names();
        let mut s = format!("Q[{}]", names.join(","));
        if !self.inverted.is_empty() {
            let inv: Vec<String> = self.inverted.iter().map(|t| t.render(&names)).collect();
            s.push_str(&format!("[1/{}]", inv.join(",1/")));
        }
        s
    }

    pub fn to_json(&self) -> CompRingJson {
        CompRingJson {
            nvars: self.nvars,
            inverted: self.inverted.iter().map(poly_json).collect(),
        }
    }

    pub fn from_json(j: &CompRingJson) -> Result<Self> {
        let forms = j
            .inverted
            .iter()
            .map(|t| poly_from_json(j.nvars, t))
            .collect::<Result<Vec<_>>>()?;
        CompRing::localized(j.nvars, &forms)
    }
}

pub type PolyJson = Vec<(Vec<u32>, String)>;

pub fn poly_json(p: &Poly) -> PolyJson {
    p.terms()
        .iter()
        .map(|(e, c)| (e.clone(), super::poly::q_str(c)))
        .collect()
}

pub fn poly_from_json(nvars: usize, j: &PolyJson) -> Result<Poly> {
    let mut terms = Vec::new();
    for (e, c) in j {
        if e.len() != nvars {
            return Err(Error::Construction("monomial length mismatch".into()));
        }
        let c = super::poly::q_parse(c)
            .ok_or_else(|| Error::Construction(format!("bad rational {c}")))?;
        terms.push((e.clone(), c));
    }
    Ok(Poly::from_terms(nvars, terms))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompRingJson {
    pub nvars: usize,
    pub inverted: Vec<PolyJson>,
}

/// A graded ring map between [`CompRing`]s, given by the images of the
/// variables. Images of inverted forms are recorded as units of the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompRingMap {
    src: CompRing,
    tgt: CompRing,
    images: Vec<Poly>,
    inv_images: Vec<(Q, Vec<i64>)>,
}

impl CompRingMap {
    pub fn new(src: &CompRing, tgt: &CompRing, images: Vec<Poly>) -> Result<Self> {
        if images.len() != src.nvars || images.iter().any(|p| p.nvars() != tgt.nvars) {
            return Err(Error::Construction(
                "variable images have the wrong shape".into(),
            ));
        }
        for p in &images {
            if !p.is_zero() && p.homogeneous_degree() != Some(1) {
                return Err(Error::Construction(
                    "ring map does not preserve degree".into(),
                ));
            }
        }
        let mut inv_images = Vec::with_capacity(src.inverted.len());
        for t in &src.inverted {
            let img = tgt.from_poly(t.substitute(&images, tgt.nvars));
            match tgt.unit_decomposition(&img) {
                Some(u) => inv_images.push(u),
                None => {
                    return Err(Error::Construction(format!(
                        "{} is not sent to a unit of {}",
                        t.render(&src.var_names()),
                        tgt.describe()
                    )))
                }
            }
        }
        Ok(CompRingMap {
            src: src.clone(),
            tgt: tgt.clone(),
            images,
            inv_images,
        })
    }

    pub fn identity(r: &CompRing) -> Self {
        let images = (0..r.nvars).map(|i| Poly::var(r.nvars, i)).collect();
        CompRingMap::new(r, r, images).expect("identity is a ring map")
    }

    /// The localization map `r → r[1/forms]`.
    pub fn localization(r: &CompRing, tgt: &CompRing) -> Result<Self> {
        if !tgt.is_localization_of(r) {
            return Err(Error::Construction(format!(
                "{} is not a localization of {}",
                tgt.describe(),
                r.describe()
            )));
        }
        let images = (0..r.nvars).map(|i| Poly::var(r.nvars, i)).collect();
        CompRingMap::new(r, tgt, images)
    }

    pub fn src(&self) -> &CompRing {
        &self.src
    }

    pub fn tgt(&self) -> &CompRing {
        &self.tgt
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && *self == CompRingMap::identity(&self.src)
    }

    pub fn apply(&self, a: &Fraction) -> Fraction {
        let mut acc = self
            .tgt
            .from_poly(a.num.substitute(&self.images, self.tgt.nvars));
        for (i, &e) in a.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            // (λ ∏ t^exps)^(-e)
            let (lambda, exps) = &self.inv_images[i];
            let lam = num_traits::pow(Q::one() / lambda.clone(), e as usize);
            let neg: Vec<i64> = exps.iter().map(|x| -x * e as i64).collect();
            acc = self.tgt.mul(&acc, &self.tgt.unit_from(&lam, &neg));
        }
        acc
    }

    pub fn apply_mono(&self, m: &Mono) -> Fraction {
        self.apply(&self.src.mono(m))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CompRingMap) -> Result<CompRingMap> {
        if self.tgt != other.src {
            return Err(Error::Construction(
                "composing ring maps with mismatched rings".into(),
            ));
        }
        let images = self
            .images
            .iter()
            .map(|p| p.substitute(&other.images, other.tgt.nvars))
            .collect();
        CompRingMap::new(&self.src, &other.tgt, images)
    }

    pub fn to_json(&self) -> CompRingMapJson {
        CompRingMapJson {
            src: self.src.to_json(),
            tgt: self.tgt.to_json(),
            images: self.images.iter().map(poly_json).collect(),
        }
    }

    pub fn from_json(j: &CompRingMapJson) -> Result<Self> {
        let src = CompRing::from_json(&j.src)?;
        let tgt = CompRing::from_json(&j.tgt)?;
        let images = j
            .images
            .iter()
            .map(|p| poly_from_json(tgt.nvars, p))
            .collect::<Result<Vec<_>>>()?;
        CompRingMap::new(&src, &tgt, images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompRingMapJson {
    pub src: CompRingJson,
    pub tgt: CompRingJson,
    pub images: Vec<PolyJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;

    #[test]
    fn fractions_cancel() {
        let r = CompRing::localized(1, &[Poly::var(1, 0)]).unwrap();
        let c = r.var(0);
        let inv = r.inverse(&c).unwrap();
        assert_eq!(r.mul(&c, &inv), r.one());
        assert!(r.equal(&r.mul(&c, &c), &r.fraction(Poly::var(1, 0).pow(3), vec![1])));
    }

    #[test]
    fn localized_at_x_in_two_variables() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let r = CompRing::localized(2, &[x.clone()]).unwrap();
        let a = r.fraction(x.mul(&y), vec![1]);
        assert_eq!(a, r.from_poly(y.clone()));
        assert!(!r.is_unit(&r.from_poly(y)));
        assert!(r.is_unit(&r.from_poly(x.scale(&q(3)))));
    }

    #[test]
    fn zero_is_not_a_unit() {
        let r = CompRing::localized(1, &[Poly::var(1, 0)]).unwrap();
        assert!(!r.is_unit(&r.zero()));
        assert!(r.inverse(&r.zero()).is_none());
    }

    #[test]
    fn zero_cannot_be_inverted() {
        assert!(matches!(
            CompRing::localized(1, &[Poly::zero(1)]),
            Err(Error::Uncertified(_))
        ));
    }

    #[test]
    fn laurent_coordinates() {
        let r = CompRing::localized(1, &[Poly::var(1, 0)]).unwrap();
        let a = r.scale(&r.mono(&vec![-2]), &q(5));
        assert_eq!(r.degree(&a), Some(-4));
        assert_eq!(r.coords(&a, -4).unwrap(), vec![q(5)]);
        assert_eq!(r.from_coords(&[q(5)], -4), a);
    }

    #[test]
    fn map_on_denominators() {
        let src = CompRing::localized(1, &[Poly::var(1, 0)]).unwrap();
        let tgt = CompRing::localized(2, &[Poly::linear(&[q(1), q(-1)])]).unwrap();
        let phi = CompRingMap::new(&src, &tgt, vec![Poly::linear(&[q(2), q(-2)])]).unwrap();
        let inv_c = src.inverse(&src.var(0)).unwrap();
        let img = phi.apply(&inv_c);
        let back = tgt.mul(&img, &tgt.from_poly(Poly::linear(&[q(2), q(-2)])));
        assert_eq!(back, tgt.one());
    }
}
