//! Test modules over the flag coefficient diagrams.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::instance::Instance;
use crate::diagram::{ModuleDiagram, RingDiagram};
use crate::error::{precondition, Error, Result};
use crate::modules::{CompMap, CompModule, Elem, ModMap, ModuleValue, Pieces, Window};
use crate::ring::{EulerSystem, Fraction, ProductRing, QVec, RingElem, RingMap, SplittingDiagram};

/// Which flag coefficient diagram of an instance a module lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `R_a^f` on flags of the cotoral poset.
    Toral,
    /// `R_c^f` on flags of the connected poset.
    Connected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModuleKind {
    /// `R ⊗ V` with `V` free on the given degrees.
    Free { degrees: Vec<i64> },
    /// `R` shifted so that the generator sits in the given degree.
    Shift { degree: i64 },
    /// `ℚ[c]/c^length` at the length-zero flag of a node, zero elsewhere.
    Torsion { node: usize, length: u32 },
    /// `R(K)` at the length-zero flag `(K)`, zero elsewhere.
    Skyscraper { node: usize },
    /// Lattices `g_L V` in `E⁻¹R ⊗ V` with random monotone exponents;
    /// qce when the exponents depend only on the maximal element.
    Ambient { seed: u64, extended: bool },
    /// A qce ambient module with its value at the top replaced by zero.
    Topless { seed: u64 },
}

impl ModuleKind {
    /// Parses `free:0,2`, `shift:-2`, `torsion:NODE:LEN`, `skyscraper:NODE`,
    /// `ambient:SEED`, `ambient-qc:SEED` or `topless:SEED`, with nodes named
    /// by their labels in `base`.
    pub fn parse(s: &str, base: &crate::poset::Poset) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse module kind {s:?}"));
        let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        let node = |x: &str| {
            base.index_of_label(x)
                .ok_or_else(|| Error::Precondition(format!("no node labelled {x:?}")))
        };
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        Ok(match head {
            "ring" => ModuleKind::Free { degrees: vec![0] },
            "free" => ModuleKind::Free {
                degrees: rest.split(',').map(int).collect::<Result<_>>()?,
            },
            "shift" => ModuleKind::Shift { degree: int(rest)? },
            "torsion" => {
                let (n, len) = rest.split_once(':').ok_or_else(bad)?;
                ModuleKind::Torsion {
                    node: node(n)?,
                    length: len.parse().map_err(|_| bad())?,
                }
            }
            "skyscraper" => ModuleKind::Skyscraper { node: node(rest)? },
            "ambient" => ModuleKind::Ambient {
                seed: rest.parse().map_err(|_| bad())?,
                extended: true,
            },
            "ambient-qc" => ModuleKind::Ambient {
                seed: rest.parse().map_err(|_| bad())?,
                extended: false,
            },
            "topless" => ModuleKind::Topless {
                seed: rest.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        })
    }
}

/// A coefficient diagram with the data it was localized from.
#[derive(Clone, Copy)]
pub struct Coefficients<'a> {
    pub ring: &'a Arc<RingDiagram>,
    pub rs: &'a SplittingDiagram,
    pub sys: &'a EulerSystem,
    /// Largest Euler-class exponent a generated module may divide by.
    pub max_exponent: u32,
}

impl Instance {
    pub fn side(&self, side: Side) -> Coefficients<'_> {
        let max_exponent = self.config.denominator_bound.min(u32::MAX as u64) as u32;
        match side {
            Side::Toral => Coefficients {
                ring: &self.r_af,
                rs: &self.rs_a,
                sys: &self.sys_a,
                max_exponent,
            },
            Side::Connected => Coefficients {
                ring: &self.r_cf,
                rs: &self.rs_c,
                sys: &self.sys_c,
                max_exponent,
            },
        }
    }
}

pub fn gen_module(c: Coefficients<'_>, kind: &ModuleKind, w: Window) -> Result<ModuleDiagram> {
    match kind {
        ModuleKind::Free { degrees } => free_module(c.ring, degrees, w),
        ModuleKind::Shift { degree } => free_module(c.ring, &[*degree], w),
        ModuleKind::Torsion { node, length } => torsion(c.ring, *node, *length, w),
        ModuleKind::Skyscraper { node } => skyscraper(c.ring, *node, w),
        ModuleKind::Ambient { seed, extended } => {
            let data = AmbientData::random(c, *seed, *extended)?;
            ambient(c, &data, w)
        }
        ModuleKind::Topless { seed } => {
            let data = AmbientData::random(c, *seed, true)?;
            topless(&ambient(c, &data, w)?)
        }
    }
}

/// Free on `degrees` everywhere, with the ring maps on coordinates.
pub fn free_module(ring: &Arc<RingDiagram>, degrees: &[i64], w: Window) -> Result<ModuleDiagram> {
    let values: Vec<ModuleValue> = ring
        .rings()
        .iter()
        .map(|r| ModuleValue::free(r, degrees))
        .collect();
    let mut maps = BTreeMap::new();
    for (&(a, b), phi) in ring.maps() {
        if a != b {
            let comps = (0..phi.tgt_len())
                .map(|j| {
                    CompMap::Basis(
                        (0..degrees.len())
                            .map(|i| values[b].component(j).basis_elem(i))
                            .collect(),
                    )
                })
                .collect();
            maps.insert((a, b), ModMap::new(comps));
        }
    }
    ModuleDiagram::new(ring.clone(), w, values, maps)
}

pub fn torsion(
    ring: &Arc<RingDiagram>,
    node: usize,
    length: u32,
    w: Window,
) -> Result<ModuleDiagram> {
    let idx = ring.index();
    let at = idx.diagonal(node);
    let r = ring.ring(at);
    let comps = r
        .components()
        .iter()
        .map(|cr| {
            let free = Pieces::free(cr, w, &[0]);
            let spaces: Vec<Vec<QVec>> = w
                .degrees()
                .map(|d| {
                    let n = free.dim(d);
                    if d >= 2 * length as i64 {
                        (0..n)
                            .map(|j| crate::ring::linalg::unit_vec(n, j))
                            .collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let (p, _) = free.quotient(cr, &spaces)?;
            CompModule::from_pieces(cr.clone(), p)
        })
        .collect::<Result<Vec<_>>>()?;
    concentrated(ring, at, ModuleValue::new(r, comps)?, w)
}

pub fn skyscraper(ring: &Arc<RingDiagram>, node: usize, w: Window) -> Result<ModuleDiagram> {
    let at = ring.index().diagonal(node);
    concentrated(ring, at, ModuleValue::free(ring.ring(at), &[0]), w)
}

/// `v` at one length-zero flag and zero elsewhere; a length-zero flag has
/// no strict subflags, so every map is zero.
fn concentrated(
    ring: &Arc<RingDiagram>,
    at: usize,
    v: ModuleValue,
    w: Window,
) -> Result<ModuleDiagram> {
    let values: Vec<ModuleValue> = (0..ring.len())
        .map(|i| {
            if i == at {
                v.clone()
            } else {
                ModuleValue::zero(ring.ring(i))
            }
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (&(a, b), phi) in ring.maps() {
        if a != b {
            maps.insert((a, b), ModMap::zero(&values[a], &values[b], phi, w)?);
        }
    }
    ModuleDiagram::new(ring.clone(), w, values, maps)
}

/// Generator degrees of `V` and the exponents `n[L][H][i]` of the maximal
/// `H ≥ L` in the generator `g_{L,i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbientData {
    pub degrees: Vec<i64>,
    pub exponents: Vec<BTreeMap<usize, Vec<u32>>>,
}

impl AmbientData {
    pub fn random(c: Coefficients<'_>, seed: u64, extended: bool) -> Result<Self> {
        let base = c.rs.base();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = rng.gen_range(1..=2usize);
        let degrees: Vec<i64> = (0..rank).map(|_| 2 * rng.gen_range(-1..=1i64)).collect();
        let maximal = base.maximal();
        // nodes with fewer nodes above them come first
        let mut order: Vec<usize> = (0..base.len()).collect();
        order.sort_by_key(|&l| ((0..base.len()).filter(|&k| base.leq(l, k)).count(), l));
        let mut exponents: Vec<BTreeMap<usize, Vec<u32>>> = vec![BTreeMap::new(); base.len()];
        for &l in &order {
            for &h in maximal.iter().filter(|&&h| base.leq(l, h)) {
                let e: Vec<u32> = (0..rank)
                    .map(|i| {
                        if l == h {
                            return rng.gen_range(0..=c.max_exponent.min(2));
                        }
                        let cap = (0..base.len())
                            .filter(|&k| k != l && base.leq(l, k) && base.leq(k, h))
                            .map(|k| exponents[k][&h][i])
                            .min()
                            .expect("h itself lies above l");
                        if extended {
                            cap
                        } else {
                            rng.gen_range(0..=cap)
                        }
                    })
                    .collect();
                exponents[l].insert(h, e);
            }
        }
        Ok(AmbientData { degrees, exponents })
    }

    /// Whether the exponents satisfy `n_K ≥ n_L` for `L ≤ K ≤ H`.
    pub fn is_monotone(&self, base: &crate::poset::Poset) -> bool {
        (0..base.len()).all(|l| {
            self.exponents[l].iter().all(|(&h, nl)| {
                (0..base.len())
                    .filter(|&k| base.leq(l, k) && base.leq(k, h))
                    .all(|k| self.exponents[k][&h].iter().zip(nl).all(|(a, b)| a >= b))
            })
        })
    }
}

/// The Euler generator `e^H` used by the ambient construction.
fn euler_generator(sys: &EulerSystem, h: usize) -> Result<&RingElem> {
    sys.generators()
        .get(&h)
        .and_then(|g| g.first())
        .ok_or_else(|| Error::Precondition(format!("no Euler generator at node {h}")))
}

/// `∏_H (e^H)^{n[l][H][i] - n[l'][H][i]}` in `R(F)`, where `F` has last
/// term `l'` and `to_f: R(G/l') → R(F)`.
fn ratio(
    c: Coefficients<'_>,
    data: &AmbientData,
    l: usize,
    lp: usize,
    i: usize,
    to_f: &RingMap,
    rf: &ProductRing,
) -> Result<RingElem> {
    let mut out = rf.one();
    for (&h, nl) in &data.exponents[lp] {
        let top = data.exponents[l].get(&h).map(|n| n[i]).unwrap_or(0) as i64;
        let e = top - nl[i] as i64;
        if e == 0 {
            continue;
        }
        let g = to_f.apply(&c.rs.inflation(h, lp)?.apply(euler_generator(c.sys, h)?));
        for (j, cr) in rf.components().iter().enumerate() {
            let base: Fraction = if e > 0 {
                g[j].clone()
            } else {
                cr.inverse(&g[j]).ok_or_else(|| {
                    Error::Construction(format!(
                        "Euler generator of node {h} is not inverted at {}",
                        c.rs.base().label(lp)
                    ))
                })?
            };
            out[j] = cr.mul(&out[j], &cr.pow(&base, e.unsigned_abs() as u32));
        }
    }
    for &h in data.exponents[l].keys() {
        if !data.exponents[lp].contains_key(&h) {
            return precondition(format!("node {h} lies above {} but not above {}", l, lp));
        }
    }
    Ok(out)
}

/// Degree of `g_{L,i}` in each component ring of `R(G/L)`.
fn generator_degree(
    c: Coefficients<'_>,
    data: &AmbientData,
    l: usize,
    i: usize,
) -> Result<Vec<i64>> {
    let r = c.rs.ring(l);
    let mut deg = vec![0i64; r.len()];
    for (&h, n) in &data.exponents[l] {
        let g = c.rs.inflation(h, l)?.apply(euler_generator(c.sys, h)?);
        for (j, cr) in r.components().iter().enumerate() {
            let d = cr
                .degree(&g[j])
                .ok_or_else(|| Error::Construction("Euler generator is not homogeneous".into()))?;
            deg[j] += d * n[i] as i64;
        }
    }
    Ok(deg)
}

pub fn ambient(c: Coefficients<'_>, data: &AmbientData, w: Window) -> Result<ModuleDiagram> {
    let ring = c.ring;
    let idx = ring.index();
    if !idx.is_flags() {
        return precondition("ambient modules live on flags");
    }
    let base = c.rs.base();
    if !data.is_monotone(base) {
        return precondition("ambient exponents are not monotone");
    }
    let rank = data.degrees.len();
    let mut gdeg: Vec<Vec<Vec<i64>>> = Vec::with_capacity(base.len());
    for l in 0..base.len() {
        gdeg.push(
            (0..rank)
                .map(|i| generator_degree(c, data, l, i))
                .collect::<Result<_>>()?,
        );
    }
    let values = (0..idx.len())
        .map(|f| {
            let l = idx.last(f);
            let r = ring.ring(f);
            let comps = r
                .components()
                .iter()
                .enumerate()
                .map(|(j, cr)| {
                    CompModule::free(
                        cr.clone(),
                        (0..rank).map(|i| data.degrees[i] + gdeg[l][i][j]).collect(),
                    )
                })
                .collect();
            ModuleValue::new(r, comps)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut maps = BTreeMap::new();
    for (&(e, f), phi) in ring.maps() {
        if e == f {
            continue;
        }
        let (le, lf) = (idx.last(e), idx.last(f));
        let rf = ring.ring(f);
        let to_f = RingMap::localization(c.rs.ring(lf), rf)?;
        let ratios = (0..rank)
            .map(|i| ratio(c, data, le, lf, i, &to_f, rf))
            .collect::<Result<Vec<_>>>()?;
        let comps = (0..phi.tgt_len())
            .map(|j| {
                let cr = rf.component(j);
                CompMap::Basis(
                    (0..rank)
                        .map(|i| {
                            Elem::Coords(
                                (0..rank)
                                    .map(|k| {
                                        if k == i {
                                            ratios[i][j].clone()
                                        } else {
                                            cr.zero()
                                        }
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        maps.insert((e, f), ModMap::new(comps));
    }
    ModuleDiagram::new(ring.clone(), w, values, maps)
}

/// `M` with `M((G)) = 0`; the top length-zero flag has no strict subflags
/// and maps out of zero are zero, so the rest of `M` is unchanged.
pub fn topless(m: &ModuleDiagram) -> Result<ModuleDiagram> {
    let ring = m.ring();
    let top = ring.index().diagonal(ring.index().base().top());
    let w = m.window();
    let mut values = m.values().to_vec();
    values[top] = ModuleValue::zero(ring.ring(top));
    let mut maps = BTreeMap::new();
    for (&(a, b), f) in m.maps() {
        if a == b {
            continue;
        }
        let f = if a == top {
            ModMap::zero(&values[a], &values[b], ring.map(a, b), w)?
        } else {
            f.clone()
        };
        maps.insert((a, b), f);
    }
    ModuleDiagram::new(ring.clone(), w, values, maps)
}

/// A named corpus entry.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub side: Side,
    pub kind: ModuleKind,
    pub module: ModuleDiagram,
}

/// The standard corpus: free and shifted modules, torsion where the rings
/// allow it, skyscrapers, and `count` ambient modules split evenly between
/// qce and merely qc.
pub fn corpus(inst: &Instance, side: Side, count: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    let w = inst.window();
    let c = inst.side(side);
    let base = c.rs.base().clone();
    let mut kinds = vec![
        ModuleKind::Free { degrees: vec![0] },
        ModuleKind::Free {
            degrees: vec![0, 2],
        },
        ModuleKind::Shift { degree: -2 },
    ];
    for k in 0..base.len() {
        let finite = c
            .ring
            .ring(c.ring.index().diagonal(k))
            .components()
            .iter()
            .all(|r| r.is_finite_type());
        if finite && base.codim(k) <= 1 && inst.rank == 1 {
            kinds.push(ModuleKind::Torsion { node: k, length: 2 });
        }
    }
    kinds.push(ModuleKind::Skyscraper { node: base.top() });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        kinds.push(ModuleKind::Ambient {
            seed: rng.gen(),
            extended: i % 2 == 0,
        });
    }
    kinds.push(ModuleKind::Topless { seed: rng.gen() });
    kinds
        .into_iter()
        .map(|kind| {
            let module = gen_module(c, &kind, w)?;
            Ok(CorpusEntry {
                name: kind_name(&kind, &base),
                side,
                kind,
                module,
            })
        })
        .collect()
}

pub fn kind_name(kind: &ModuleKind, base: &crate::poset::Poset) -> String {
    match kind {
        ModuleKind::Free { degrees } => format!("free{degrees:?}"),
        ModuleKind::Shift { degree } => format!("shift[{degree}]"),
        ModuleKind::Torsion { node, length } => format!("torsion({},{length})", base.label(*node)),
        ModuleKind::Skyscraper { node } => format!("skyscraper({})", base.label(*node)),
        ModuleKind::Ambient { seed, extended } => {
            format!(
                "ambient-{}({seed:016x})",
                if *extended { "qce" } else { "qc" }
            )
        }
        ModuleKind::Topless { seed } => format!("topless({seed:016x})"),
    }
}
