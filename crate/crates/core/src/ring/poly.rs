use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text for a rational, `n` or `n/d`.
pub fn q_str(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_parse(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.trim().parse().ok()?)),
    }
}

/// A polynomial with rational coefficients in `nvars` variables, each of
/// cohomological degree 2. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `Σ coeffs[i] · x_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Polynomial degree of a homogeneous polynomial; `None` for zero or
    /// inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Substitutes `images[i]` for `x_i`; all images share one variable count.
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut out = Poly::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        let (ld, lc) = (ld.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((lp, cp)) = rest.leading() {
            if lp.iter().zip(&ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = lp.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(e, cp / &lc);
            rest = rest.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Coefficients of a linear form, or `None` if not homogeneous of degree 1.
    pub fn linear_coeffs(&self) -> Option<Vec<Q>> {
        if self.homogeneous_degree() != Some(1) {
            return None;
        }
        let mut v = vec![Q::zero(); self.nvars];
        for (e, c) in &self.terms {
            let i = e.iter().position(|&x| x == 1).unwrap();
            v[i] = c.clone();
        }
        Some(v)
    }

    /// Scales so that the leading coefficient is 1; returns the scale removed.
    pub fn monic(&self) -> (Q, Poly) {
        match self.leading() {
            None => (Q::one(), self.clone()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&(Q::one() / c)))
            }
        }
    }

    /// Deterministic text, terms in decreasing lex order.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], x)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(out, "{}", q_str(&a)).unwrap();
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                write!(out, "{}*{}", q_str(&a), mono.join("*")).unwrap();
            }
        }
        out
    }
}

/// Exponent vectors of total degree `d` in `n` variables, in decreasing lex
/// order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn arithmetic_and_rendering() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.render(&names()), "x^2 - y^2");
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.div_exact(&x.sub(&y)).unwrap(), x.add(&y));
        assert!(p.div_exact(&x).is_none());
        assert_eq!(Poly::zero(2).render(&names()), "0");
        assert_eq!(x.scale(&q_frac(-1, 3)).render(&names()), "-1/3*x");
    }

    #[test]
    fn substitution() {
        let t = Poly::var(1, 0);
        let img = Poly::linear(&[q(1), q(-1)]);
        assert_eq!(t.pow(2).substitute(&[img.clone()], 2), img.mul(&img));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(
            monomials_of_degree(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(monomials_of_degree(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials_of_degree(0, 1).is_empty());
    }
}
