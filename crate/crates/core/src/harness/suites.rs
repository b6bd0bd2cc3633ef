//! The law suites. Every suite runs a fixed list of laws against one
//! instance and records a verdict per law; a law that errors is a failure
//! carrying the error as its witness, except that an element which could not
//! be certified invertible makes the law uncertified.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::corpus::{corpus, free_module, CorpusEntry, ModuleKind, Side};
use super::instance::Instance;
use super::oracle;
use crate::diagram::{
    is_extended, is_middle_independent, is_qc, is_qce, DiagramMorphism, ModuleDiagram,
};
use crate::error::{Error, Result};
use crate::functors::{
    adapted_counit, adapted_unit, apply_e, apply_e_map, connected_round_trip, fp_comparison,
    functor_f, functor_p, gamma_d, gamma_v, hand_built_objects, is_p_module, pi_shriek,
    pi_shriek_e, pi_shriek_e_map, pi_shriek_map, pi_star, rank1_gamma_qd, rejected_objects,
    same_module, section_map, sections, strictness_witness, toral_round_trip, ConnectedObject,
    Pushforward, Rank1,
};
use crate::modules::Elem;
use crate::poset::{FlagPoset, Poset, PosetMap};
use crate::ring::borel::{component_order, power_of_faithful};
use crate::ring::{
    euler_class, transitivity_check, EulerSystem, EulerVariant, Poly, ProductRing, RingElem,
    RingMap, SplittingDiagram, Q,
};

/// Random ambient modules per side in the suite corpus.
pub const AMBIENT_PER_SIDE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Posets,
    Euler,
    Predicates,
    Adjunctions,
    Equivalences,
    Rank1,
    Gamma,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Posets,
        Suite::Euler,
        Suite::Predicates,
        Suite::Adjunctions,
        Suite::Equivalences,
        Suite::Rank1,
        Suite::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Posets => "posets",
            Suite::Euler => "euler",
            Suite::Predicates => "predicates",
            Suite::Adjunctions => "adjunctions",
            Suite::Equivalences => "equivalences",
            Suite::Rank1 => "rank1",
            Suite::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Precondition(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Uncertified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Uncertified => "uncertified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawResult {
    pub suite: Suite,
    pub instance: String,
    pub law: String,
    pub anchor: String,
    pub status: Status,
    /// Cases examined.
    pub checked: usize,
    /// Cases outside the law's hypotheses.
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Left out of exported reports, which must be byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub laws: Vec<LawResult>,
    /// Laws not run on an instance, with the reason.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub not_applicable: Vec<String>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.status == Status::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.laws.iter().any(|l| l.status == Status::Fail)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn extend(&mut self, other: LawReport) {
        self.laws.extend(other.laws);
        self.not_applicable.extend(other.not_applicable);
    }

    pub fn without_timings(&self) -> LawReport {
        let mut r = self.clone();
        for l in &mut r.laws {
            l.wall_ms = None;
        }
        r
    }

    /// Pretty JSON without timings.
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.without_timings())?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn render_text(&self, timings: bool) -> String {
        let mut out = String::new();
        for l in &self.laws {
            out.push_str(&format!(
                "[{}] {}/{}: {} (checked {}",
                l.status, l.instance, l.suite, l.law, l.checked
            ));
            if l.skipped > 0 {
                out.push_str(&format!(", skipped {}", l.skipped));
            }
            if let (true, Some(ms)) = (timings, l.wall_ms) {
                out.push_str(&format!(", {ms:.0} ms"));
            }
            out.push(')');
            if let Some(w) = &l.witness {
                out.push_str(&format!("\n    witness: {w}"));
            }
            out.push('\n');
        }
        for n in &self.not_applicable {
            out.push_str(&format!("[n/a] {n}\n"));
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    witness: Option<String>,
}

impl Tally {
    fn fail(mut self, witness: impl Into<String>) -> Tally {
        self.witness = Some(witness.into());
        self
    }
}

/// Stops the enclosing law at the first defect.
macro_rules! require {
    ($t:ident, $defect:expr, $($ctx:tt)+) => {
        if let Some(d) = $defect {
            return Ok($t.fail(format!("{}: {}", format!($($ctx)+), d)));
        }
    };
}

struct Runner<'a> {
    suite: Suite,
    inst: &'a Instance,
    report: LawReport,
}

impl Runner<'_> {
    fn law(&mut self, law: &str, anchor: &str, f: impl FnOnce() -> Result<Tally>) {
        let start = Instant::now();
        let (status, checked, skipped, witness) = match f() {
            Ok(t) => (
                if t.witness.is_some() {
                    Status::Fail
                } else {
                    Status::Pass
                },
                t.checked,
                t.skipped,
                t.witness,
            ),
            Err(Error::Uncertified(m)) => (Status::Uncertified, 0, 0, Some(m)),
            Err(e) => (Status::Fail, 0, 0, Some(e.to_string())),
        };
        self.report.laws.push(LawResult {
            suite: self.suite,
            instance: self.inst.name.clone(),
            law: law.to_string(),
            anchor: anchor.to_string(),
            status,
            checked,
            skipped,
            witness,
            wall_ms: Some(start.elapsed().as_secs_f64() * 1000.0),
        });
    }

    fn not_applicable(&mut self, law: &str, why: &str) {
        self.report
            .not_applicable
            .push(format!("{}/{}: {law}: {why}", self.inst.name, self.suite));
    }
}

struct Corpora {
    toral: Vec<CorpusEntry>,
    connected: Vec<CorpusEntry>,
}

impl Corpora {
    fn build(inst: &Instance) -> Result<Self> {
        let seed = inst.config.seed;
        Ok(Corpora {
            toral: corpus(inst, Side::Toral, AMBIENT_PER_SIDE, seed)?,
            connected: corpus(
                inst,
                Side::Connected,
                AMBIENT_PER_SIDE,
                seed.wrapping_add(1),
            )?,
        })
    }

    fn all(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.toral.iter().chain(&self.connected)
    }
}

type Named = Vec<(String, ModuleDiagram)>;

fn named(entries: &[CorpusEntry]) -> Named {
    entries
        .iter()
        .map(|e| (e.name.clone(), e.module.clone()))
        .collect()
}

/// `p` of every middle-independent entry.
fn pair_modules(
    entries: &[CorpusEntry],
    rp: &std::sync::Arc<crate::diagram::RingDiagram>,
) -> Result<Named> {
    let mut out = Vec::new();
    for e in entries {
        match functor_p(&e.module, rp) {
            Ok(p) => out.push((format!("p {}", e.name), p)),
            Err(Error::Precondition(_)) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

/// A pushforward with sample modules over its source and target diagrams.
struct Along<'a> {
    name: &'static str,
    push: &'a Pushforward,
    src: Named,
    tgt: Named,
}

fn pushforwards<'a>(inst: &'a Instance, corp: &Corpora) -> Result<Vec<Along<'a>>> {
    let shrieked = corp
        .connected
        .iter()
        .map(|e| {
            Ok((
                format!("π_! {}", e.name),
                pi_shriek(&inst.d_flags, &e.module)?,
            ))
        })
        .collect::<Result<Named>>()?;
    Ok(vec![
        Along {
            name: "q on flags",
            push: &inst.q_flags,
            src: named(&corp.toral),
            tgt: named(&corp.connected),
        },
        Along {
            name: "q on pairs",
            push: &inst.q_pairs,
            src: pair_modules(&corp.toral, &inst.r_ap)?,
            tgt: pair_modules(&corp.connected, &inst.r_cp)?,
        },
        Along {
            name: "dimension on flags",
            push: &inst.d_flags,
            src: named(&corp.connected),
            tgt: shrieked,
        },
    ])
}

/// The morphism with identity components between modules with equal values.
fn identity_between(src: &ModuleDiagram, tgt: &ModuleDiagram) -> Result<DiagramMorphism> {
    DiagramMorphism::new(
        src,
        tgt,
        DiagramMorphism::identity(src)?.components().to_vec(),
    )
}

fn not_identity(f: &DiagramMorphism, m: &ModuleDiagram) -> Result<Option<&'static str>> {
    Ok((!f.is_identity(m)?).then_some("composite is not the identity"))
}

fn corpus_or_err(c: &Result<Corpora>) -> Result<&Corpora> {
    c.as_ref()
        .map_err(|e| Error::Construction(format!("corpus: {e}")))
}

/// Whether Γ_v can be built: flag rings of finite type everywhere.
fn finite_rank1(inst: &Instance) -> bool {
    inst.rank == 1
        && [&inst.r_af, &inst.r_cf].iter().all(|r| {
            r.rings()
                .iter()
                .all(|p| p.components().iter().all(|c| c.is_finite_type()))
        })
}

pub fn run_suite(inst: &Instance, suite: Suite) -> LawReport {
    let mut r = Runner {
        suite,
        inst,
        report: LawReport::default(),
    };
    match suite {
        Suite::Posets => posets(&mut r),
        Suite::Euler => euler(&mut r),
        Suite::Predicates => predicates(&mut r, &Corpora::build(inst)),
        Suite::Adjunctions => adjunctions(&mut r, &Corpora::build(inst)),
        Suite::Equivalences => equivalences(&mut r, &Corpora::build(inst)),
        Suite::Rank1 => rank1(&mut r),
        Suite::Gamma => gamma(&mut r, &Corpora::build(inst)),
    }
    r.report
}

pub fn run_suites(inst: &Instance, suites: &[Suite]) -> LawReport {
    let mut out = LawReport::default();
    for &s in suites {
        out.extend(run_suite(inst, s));
    }
    out
}

/// The instance with one Euler generator of the toral system replaced by
/// zero, a designed counterexample for the Euler suite.
pub fn with_zero_euler_generator(inst: &Instance) -> Instance {
    let mut m = inst.clone();
    m.name = format!("{}+zero-euler", inst.name);
    let rs = m.rs_a.clone();
    if let Some((&h, gens)) = m.sys_a.generators_mut().iter_mut().next() {
        if let Some(g) = gens.first_mut() {
            *g = rs.ring(h).zero();
        }
    }
    m
}

// ---------------------------------------------------------------- posets

fn order_matches(
    t: &mut Tally,
    p: &Poset,
    oracle: impl Fn(usize, usize) -> bool,
) -> Option<String> {
    for a in 0..p.len() {
        for b in 0..p.len() {
            t.checked += 1;
            let want = oracle(a, b);
            if p.leq(a, b) != want {
                return Some(format!(
                    "{} ≤ {}: poset says {}, oracle says {want}",
                    p.label(a),
                    p.label(b),
                    p.leq(a, b)
                ));
            }
        }
    }
    None
}

/// Every subflag of the image of a flag has exactly one preimage subflag.
fn cleavage(flags: &FlagPoset, pi: &PosetMap) -> Result<Tally> {
    let mut t = Tally::default();
    let base = flags.base();
    for f in flags.flags() {
        let image = pi.apply_flag(f)?;
        let subs = f.subflags();
        let images = subs
            .iter()
            .map(|e| pi.apply_flag(e))
            .collect::<Result<Vec<_>>>()?;
        for ebar in image.subflags() {
            t.checked += 1;
            let n = images.iter().filter(|x| **x == ebar).count();
            if n != 1 {
                return Ok(t.fail(format!(
                    "{} over {}: {n} subflags",
                    f.label(base),
                    ebar.label(pi.codomain())
                )));
            }
        }
    }
    Ok(t)
}

fn posets(r: &mut Runner) {
    let inst = r.inst;
    r.law(
        "cotoral order agrees with the lattice oracle",
        "cotoral inclusion order",
        || {
            let mut t = Tally::default();
            let p = &inst.sigma_a;
            let w = order_matches(&mut t, p, |a, b| oracle::cotoral(p.group(a), p.group(b)));
            Ok(match w {
                Some(w) => t.fail(w),
                None => t,
            })
        },
    );
    r.law(
        "connected order is inclusion",
        "connected subgroups under inclusion",
        || {
            let mut t = Tally::default();
            let p = &inst.sigma_c;
            let w = order_matches(&mut t, p, |a, b| oracle::contains(p.group(b), p.group(a)));
            Ok(match w {
                Some(w) => t.fail(w),
                None => t,
            })
        },
    );
    if inst.rank == 1 {
        r.law(
            "in the circle every proper subgroup lies only under the torus",
            "rank-one cotoral shape",
            || {
                let mut t = Tally::default();
                let p = &inst.sigma_a;
                let top = p.top();
                for a in 0..p.len() {
                    for b in 0..p.len() {
                        t.checked += 1;
                        let want = a == b || b == top;
                        if p.leq(a, b) != want {
                            return Ok(t.fail(format!(
                                "{} ≤ {} is {}",
                                p.label(a),
                                p.label(b),
                                p.leq(a, b)
                            )));
                        }
                    }
                }
                Ok(t)
            },
        );
    }
    r.law(
        "universe is closed",
        "closure under identity components and joins",
        || {
            let mut t = Tally::default();
            let u = &inst.universe;
            for h in u {
                t.checked += 1;
                let h0 = h.identity_component();
                if !u.contains(&h0) {
                    return Ok(t.fail(format!("identity component of {} is missing", h.name())));
                }
                for k in u.iter().filter(|k| k.is_connected()) {
                    if k.contains(&h0)? {
                        t.checked += 1;
                        if !u.contains(&h.join_istar(k)?) {
                            return Ok(t.fail(format!("{} · {} is missing", h.name(), k.name())));
                        }
                    }
                }
            }
            Ok(t)
        },
    );
    r.law(
        "cleavage along identity components",
        "unique subflag over a subflag of the image",
        || cleavage(&inst.flags_a, inst.ms.q()),
    );
    r.law(
        "cleavage along dimension",
        "unique subflag over a subflag of the image",
        || cleavage(&inst.flags_c, &inst.dim_map),
    );
}

// ---------------------------------------------------------------- euler

fn same_saturation(r: &ProductRing, a: &[RingElem], b: &[RingElem]) -> Result<bool> {
    let la = r.localize(a)?;
    let lb = r.localize(b)?;
    let to_a = RingMap::localization(r, &la)?;
    let to_b = RingMap::localization(r, &lb)?;
    Ok(
        b.iter().all(|g| la.is_unit(&to_a.apply(g)))
            && a.iter().all(|g| lb.is_unit(&to_b.apply(g))),
    )
}

fn transitivity(rs: &SplittingDiagram, sys: &EulerSystem) -> Result<Tally> {
    let mut t = Tally::default();
    let p = rs.base();
    for h in 0..p.len() {
        for k in (0..p.len()).filter(|&k| p.leq(k, h)) {
            for l in (0..p.len()).filter(|&l| p.leq(l, k)) {
                t.checked += 1;
                if !transitivity_check(sys, rs, h, k, l)? {
                    return Ok(t.fail(format!(
                        "chain {} ⊇ {} ⊇ {}",
                        p.label(h),
                        p.label(k),
                        p.label(l)
                    )));
                }
            }
        }
    }
    Ok(t)
}

fn euler(r: &mut Runner) {
    let inst = r.inst;
    r.law(
        "Euler generators are certified nonzero",
        "inverted Euler classes",
        || {
            let mut t = Tally::default();
            for (rs, sys) in [(&inst.rs_a, &inst.sys_a), (&inst.rs_c, &inst.sys_c)] {
                for (&h, gens) in sys.generators() {
                    let ring = rs.ring(h);
                    for (i, g) in gens.iter().enumerate() {
                        t.checked += 1;
                        if let Some(j) = (0..ring.len()).find(|&j| ring.component(j).is_zero(&g[j]))
                        {
                            return Ok(t.fail(format!(
                                "generator {i} at {} of {}: component {} is zero",
                                rs.base().label(h),
                                rs.base().name(),
                                ring.labels()[j]
                            )));
                        }
                    }
                }
            }
            Ok(t)
        },
    );
    r.law(
        "transitivity on every chain of the cotoral poset",
        "transitive Euler systems",
        || transitivity(&inst.rs_a, &inst.sys_a),
    );
    r.law(
        "transitivity on every chain of the connected poset",
        "transitive Euler systems",
        || transitivity(&inst.rs_c, &inst.sys_c),
    );
    r.law(
        "Euler class dichotomy",
        "Euler class of a character on a component",
        || {
            let mut t = Tally::default();
            for ht in inst.universe.iter().filter(|h| !h.is_connected()) {
                let h = ht.identity_component();
                if h.codim() != 1 {
                    continue;
                }
                let n = component_order(ht);
                let n64 = num_traits::ToPrimitive::to_i64(&n)
                    .ok_or_else(|| Error::SizeCap("component group order".into()))?;
                let cases = [
                    (n64, Poly::linear(&[Q::from_integer(n.clone())])),
                    (n64 + 1, Poly::one(1)),
                ];
                for (power, want) in cases {
                    t.checked += 1;
                    let got = euler_class(&power_of_faithful(&h, power)?, ht, &h)?;
                    if got != want {
                        return Ok(t.fail(format!(
                            "c(g^{power})({}) = {got:?}, expected {want:?}",
                            ht.name()
                        )));
                    }
                }
            }
            Ok(t)
        },
    );
    r.law(
        "Euler variants give the same localizations on every flag",
        "equivalent choices of Euler generators",
        || {
            let mut t = Tally::default();
            let rs = &inst.rs_c;
            let base = rs.base();
            for variant in [
                EulerVariant::Natural,
                EulerVariant::Diagonal,
                EulerVariant::Componentwise,
            ] {
                if variant == inst.sys_c.variant() {
                    continue;
                }
                let other = EulerSystem::standard_fibered(&inst.ms, rs, variant)?;
                for f in inst.flags_c.flags() {
                    t.checked += 1;
                    let (k, l) = (f.first(), f.last());
                    let a = inst.sys_c.euler_set(rs, k, l)?;
                    let b = other.euler_set(rs, k, l)?;
                    if !same_saturation(rs.ring(l), &a, &b)? {
                        return Ok(t.fail(format!("{variant:?} at {}", f.label(base))));
                    }
                }
            }
            Ok(t)
        },
    );
    r.law(
        "coefficient diagrams are functorial",
        "coefficient systems on flags and pairs",
        || {
            let mut t = Tally::default();
            for ring in [&inst.r_af, &inst.r_ap, &inst.r_cf, &inst.r_cp, &inst.r_df] {
                t.checked += 1;
                ring.check_functoriality()?;
            }
            for ring in [&inst.r_af, &inst.r_cf] {
                t.checked += 1;
                ring.check_middle_independence()?;
            }
            Ok(t)
        },
    );
}

// ---------------------------------------------------------------- predicates

/// The finite-length torsion module at one node: qc always, extended
/// exactly when nothing lies strictly below the node, `c^length = 0` on its
/// value and zero elsewhere.
fn torsion_defect(e: &CorpusEntry, node: usize, length: u32) -> Result<Option<String>> {
    let m = &e.module;
    let idx = m.ring().index();
    let base = idx.base();
    let w = m.window();
    if let Some(x) = is_qc(m)?.witness() {
        return Ok(Some(format!("not qc: {x}")));
    }
    let want_ext = (0..base.len()).all(|l| !base.lt(l, node));
    let ext = is_extended(m)?;
    if ext.passed() != want_ext {
        return Ok(Some(format!(
            "extended = {}, oracle says {want_ext}",
            ext.passed()
        )));
    }
    let at = idx.diagonal(node);
    for i in 0..idx.len() {
        let v = m.value(i);
        for c in v.components() {
            for d in w.degrees() {
                let want = if i == at {
                    oracle::truncated_dim(c.ring().nvars(), length, d)
                } else {
                    0
                };
                if c.dim(w, d)? != want {
                    return Ok(Some(format!(
                        "dimension {} in degree {d} at {}, expected {want}",
                        c.dim(w, d)?,
                        idx.label(i)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn predicates(r: &mut Runner, corp: &Result<Corpora>) {
    let inst = r.inst;
    let w = inst.window();
    r.law(
        "the ring diagrams are qce",
        "the coefficient ring is qce",
        || {
            let mut t = Tally::default();
            for ring in [&inst.r_af, &inst.r_cf] {
                t.checked += 1;
                let m = ModuleDiagram::ring_module(ring.clone(), w)?;
                require!(
                    t,
                    is_qce(&m)?.witness(),
                    "ring over {}",
                    ring.index().base().name()
                );
            }
            Ok(t)
        },
    );
    let has_torsion = corp
        .as_ref()
        .map(|c| {
            c.all()
                .any(|e| matches!(e.kind, ModuleKind::Torsion { .. }))
        })
        .unwrap_or(true);
    if has_torsion {
        r.law(
            "torsion modules get the oracle verdicts",
            "torsion concentrated at one node",
            || {
                let mut t = Tally::default();
                for e in corpus_or_err(corp)?.all() {
                    if let ModuleKind::Torsion { node, length } = e.kind {
                        t.checked += 1;
                        require!(
                            t,
                            torsion_defect(e, node, length)?,
                            "{} ({:?})",
                            e.name,
                            e.side
                        );
                    }
                }
                Ok(t)
            },
        );
    } else {
        r.not_applicable(
            "torsion modules get the oracle verdicts",
            "no node ring of finite type admits torsion",
        );
    }
    r.law(
        "generated qce modules are qce",
        "extension of scalars from node data",
        || {
            let mut t = Tally::default();
            for e in corpus_or_err(corp)?.all() {
                if let ModuleKind::Ambient { extended: true, .. } = e.kind {
                    t.checked += 1;
                    require!(t, is_qce(&e.module)?.witness(), "{} ({:?})", e.name, e.side);
                }
            }
            Ok(t)
        },
    );
    r.law(
        "qc modules are middle-independent",
        "qc implies middle-independent",
        || {
            let mut t = Tally::default();
            for e in corpus_or_err(corp)?.all() {
                if !is_qc(&e.module)?.passed() {
                    t.skipped += 1;
                    continue;
                }
                t.checked += 1;
                require!(
                    t,
                    is_middle_independent(&e.module)?.witness(),
                    "{} ({:?})",
                    e.name,
                    e.side
                );
            }
            Ok(t)
        },
    );
}

// ---------------------------------------------------------------- adjunctions

/// `(π_* ⊣ e)`: unit `X → eπ_*X` and counit `π_*eN → N`; with finite fibers
/// both have identity components, and naturality is what is tested.
fn pi_star_triangles(a: &Along, t: &mut Tally) -> Result<Option<String>> {
    let push = a.push;
    for (name, x) in &a.src {
        t.checked += 1;
        let (px, cert) = pi_star(push, x)?;
        if !cert.sandwiched() {
            return Ok(Some(format!(
                "{name}: π_* is not the product: {:?}",
                cert.counts
            )));
        }
        let epx = apply_e(push, &px)?;
        let eta = identity_between(x, &epx)?;
        let p_eta = pi_shriek_map(push, &eta, x, &epx)?;
        let (pepx, _) = pi_star(push, &epx)?;
        let eps = identity_between(&pepx, &px)?;
        if let Some(d) = not_identity(&p_eta.then(&eps, &px, &pepx, &px)?, &px)? {
            return Ok(Some(format!("{name} along {}: ε π_*(η): {d}", a.name)));
        }
    }
    for (name, n) in &a.tgt {
        t.checked += 1;
        let en = apply_e(push, n)?;
        let (pen, _) = pi_star(push, &en)?;
        let eps = identity_between(&pen, n)?;
        let epen = apply_e(push, &pen)?;
        let eta = identity_between(&en, &epen)?;
        let e_eps = apply_e_map(push, &eps, &pen, n)?;
        if let Some(d) = not_identity(&eta.then(&e_eps, &en, &epen, &en)?, &en)? {
            return Ok(Some(format!("{name} along {}: e(ε) η: {d}", a.name)));
        }
    }
    Ok(None)
}

/// `(e ⊣ π_!)`: unit `N → π_!eN`, counit `eπ_!M → M`.
fn shriek_triangles(a: &Along, t: &mut Tally) -> Result<Option<String>> {
    let push = a.push;
    for (name, n) in &a.tgt {
        t.checked += 1;
        if let Some(w) = is_p_module(push, n)?.witness() {
            return Ok(Some(format!("{name} is not a p-module: {w}")));
        }
        let en = apply_e(push, n)?;
        let pen = pi_shriek(push, &en)?;
        let eta = identity_between(n, &pen)?;
        let epen = apply_e(push, &pen)?;
        let eps = identity_between(&epen, &en)?;
        let e_eta = apply_e_map(push, &eta, n, &pen)?;
        if let Some(d) = not_identity(&e_eta.then(&eps, &en, &epen, &en)?, &en)? {
            return Ok(Some(format!("{name} along {}: ε e(η): {d}", a.name)));
        }
    }
    for (name, m) in &a.src {
        t.checked += 1;
        let pm = pi_shriek(push, m)?;
        let epm = apply_e(push, &pm)?;
        let eps = identity_between(&epm, m)?;
        let pepm = pi_shriek(push, &epm)?;
        let eta = identity_between(&pm, &pepm)?;
        let p_eps = pi_shriek_map(push, &eps, &epm, m)?;
        if let Some(d) = not_identity(&eta.then(&p_eps, &pm, &pepm, &pm)?, &pm)? {
            return Ok(Some(format!("{name} along {}: π_!(ε) η: {d}", a.name)));
        }
    }
    Ok(None)
}

/// `(e ⊣ π_!^e)` on qc modules: the counit is invertible and both
/// triangles compose to identities.
fn adapted_triangles(a: &Along, t: &mut Tally) -> Result<Option<String>> {
    let push = a.push;
    for (name, m) in &a.src {
        let ad = match pi_shriek_e(push, m) {
            Ok(ad) => ad,
            Err(Error::Precondition(_)) => {
                t.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        t.checked += 1;
        let eps = adapted_counit(push, &ad, m)?;
        let em = apply_e(push, &ad.module)?;
        if let Some(d) = eps.iso_defect(&em, m)? {
            return Ok(Some(format!(
                "{name} along {}: counit not invertible {d}",
                a.name
            )));
        }
        let (eta, ad2, _) = adapted_unit(push, &ad.module)?;
        let p_eps = pi_shriek_e_map(push, &eps, &ad2, &ad, &em, m)?;
        if let Some(d) = not_identity(
            &eta.then(&p_eps, &ad.module, &ad2.module, &ad.module)?,
            &ad.module,
        )? {
            return Ok(Some(format!("{name} along {}: π_!^e(ε) η: {d}", a.name)));
        }
    }
    for (name, n) in &a.tgt {
        let (eta, ad, en) = match adapted_unit(push, n) {
            Ok(x) => x,
            Err(Error::Precondition(_)) => {
                t.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        t.checked += 1;
        let e_eta = apply_e_map(push, &eta, n, &ad.module)?;
        let eps = adapted_counit(push, &ad, &en)?;
        let ead = apply_e(push, &ad.module)?;
        if let Some(d) = not_identity(&e_eta.then(&eps, &en, &ead, &en)?, &en)? {
            return Ok(Some(format!("{name} along {}: ε e(η): {d}", a.name)));
        }
    }
    Ok(None)
}

fn over_pushforwards(
    inst: &Instance,
    corp: &Result<Corpora>,
    keep: impl Fn(&Along) -> bool,
    check: impl Fn(&Along, &mut Tally) -> Result<Option<String>>,
) -> Result<Tally> {
    let mut t = Tally::default();
    for a in pushforwards(inst, corpus_or_err(corp)?)?
        .iter()
        .filter(|a| keep(a))
    {
        if let Some(w) = check(a, &mut t)? {
            return Ok(t.fail(w));
        }
    }
    Ok(t)
}

fn adjunctions(r: &mut Runner, corp: &Result<Corpora>) {
    let inst = r.inst;
    r.law("e after π_! is the identity", "e π_! = 1", || {
        over_pushforwards(
            inst,
            corp,
            |_| true,
            |a, t| {
                for (name, m) in &a.src {
                    t.checked += 1;
                    let back = apply_e(a.push, &pi_shriek(a.push, m)?)?;
                    if !same_module(&back, m)? {
                        return Ok(Some(format!("{name} along {}", a.name)));
                    }
                }
                Ok(None)
            },
        )
    });
    r.law(
        "triangle identities for π_* and e",
        "π_* left adjoint to e",
        || over_pushforwards(inst, corp, |_| true, pi_star_triangles),
    );
    r.law(
        "triangle identities for e and π_!",
        "e left adjoint to π_!",
        || over_pushforwards(inst, corp, |_| true, shriek_triangles),
    );
    r.law(
        "triangle identities for e and π_!^e on flags",
        "e left adjoint to the adapted pushforward",
        || {
            over_pushforwards(
                inst,
                corp,
                |a| a.push.src().index().is_flags(),
                adapted_triangles,
            )
        },
    );
    r.law(
        "triangle identities for e and q_!^d on pairs",
        "e left adjoint to the adapted pushforward on pairs",
        || {
            over_pushforwards(
                inst,
                corp,
                |a| !a.push.src().index().is_flags(),
                adapted_triangles,
            )
        },
    );
}

// ---------------------------------------------------------------- equivalences

fn adapted_round_trips(a: &Along, t: &mut Tally) -> Result<Option<String>> {
    let push = a.push;
    for (name, m) in &a.src {
        if !is_qce_any(m)? {
            t.skipped += 1;
            continue;
        }
        t.checked += 1;
        let ad = pi_shriek_e(push, m)?;
        let eps = adapted_counit(push, &ad, m)?;
        if let Some(d) = eps.iso_defect(&apply_e(push, &ad.module)?, m)? {
            return Ok(Some(format!("{name} along {}: e π_!^e M → M {d}", a.name)));
        }
    }
    for (name, n) in &a.tgt {
        if !is_qce_any(n)? || !is_p_module(push, n)?.passed() {
            t.skipped += 1;
            continue;
        }
        t.checked += 1;
        let (eta, ad, _) = adapted_unit(push, n)?;
        if let Some(d) = eta.iso_defect(n, &ad.module)? {
            return Ok(Some(format!("{name} along {}: N → π_!^e e N {d}", a.name)));
        }
    }
    Ok(None)
}

/// qce on flags; on pairs, the flag module it comes from was already qce.
fn is_qce_any(m: &ModuleDiagram) -> Result<bool> {
    if m.ring().index().is_flags() {
        Ok(is_qce(m)?.passed())
    } else {
        Ok(is_qc(m).map(|r| r.passed()).unwrap_or(true))
    }
}

fn equivalences(r: &mut Runner, corp: &Result<Corpora>) {
    let inst = r.inst;
    r.law(
        "f and p are inverse on middle-independent modules",
        "pairs and flags",
        || {
            let mut t = Tally::default();
            let corp = corpus_or_err(corp)?;
            for (entries, rf, rp) in [
                (&corp.toral, &inst.r_af, &inst.r_ap),
                (&corp.connected, &inst.r_cf, &inst.r_cp),
            ] {
                for e in entries {
                    if !is_middle_independent(&e.module)?.passed() {
                        t.skipped += 1;
                        continue;
                    }
                    t.checked += 1;
                    let p = functor_p(&e.module, rp)?;
                    let fp = functor_f(&p, rf)?;
                    let cmp = fp_comparison(&e.module, &fp)?;
                    require!(t, cmp.iso_defect(&fp, &e.module)?, "{}: f p M → M", e.name);
                    if !same_module(&functor_p(&fp, rp)?, &p)? {
                        return Ok(t.fail(format!("{}: p f N differs from N", e.name)));
                    }
                }
            }
            Ok(t)
        },
    );
    r.law(
        "π_!^e and e are inverse on flags",
        "adapted pushforward is an equivalence",
        || {
            over_pushforwards(
                inst,
                corp,
                |a| a.push.src().index().is_flags(),
                adapted_round_trips,
            )
        },
    );
    r.law(
        "π_!^e and e are inverse on pairs",
        "adapted pushforward is an equivalence on pairs",
        || {
            over_pushforwards(
                inst,
                corp,
                |a| !a.push.src().index().is_flags(),
                adapted_round_trips,
            )
        },
    );
    if !finite_rank1(inst) {
        r.not_applicable(
            "Γ_v q_!^d and e are inverse",
            "Γ_v needs node rings of finite type",
        );
        return;
    }
    r.law(
        "Γ_v q_!^d and e are inverse",
        "finite posets: Γ_v q_!^d inverts e",
        || {
            let mut t = Tally::default();
            let corp = corpus_or_err(corp)?;
            let push = &inst.q_flags;
            for e in &corp.toral {
                if !is_qce(&e.module)?.passed() {
                    t.skipped += 1;
                    continue;
                }
                t.checked += 1;
                let m = &e.module;
                let ad = pi_shriek_e(push, m)?;
                let g = gamma_v(&ad.module)?;
                let eg = apply_e(push, &g.module)?;
                let ex = apply_e(push, &ad.module)?;
                let e_lam = apply_e_map(push, &g.lambda, &g.module, &ad.module)?;
                let eps = adapted_counit(push, &ad, m)?;
                let back = e_lam.then(&eps, &eg, &ex, m)?;
                require!(t, back.iso_defect(&eg, m)?, "{}: e Γ_v q_!^d M → M", e.name);
            }
            for e in &corp.connected {
                if !is_qce(&e.module)?.passed() {
                    t.skipped += 1;
                    continue;
                }
                t.checked += 1;
                let n = &e.module;
                let (eta, ad, _) = adapted_unit(push, n)?;
                require!(
                    t,
                    eta.iso_defect(n, &ad.module)?,
                    "{}: N → q_!^d e N",
                    e.name
                );
                let g = gamma_v(&ad.module)?;
                require!(
                    t,
                    g.lambda.iso_defect(&g.module, &ad.module)?,
                    "{}: Γ_v q_!^d e N → q_!^d e N",
                    e.name
                );
            }
            Ok(t)
        },
    );
}

// ---------------------------------------------------------------- rank 1

fn rank1(r: &mut Runner) {
    let inst = r.inst;
    let model = Rank1::new(inst.window()).map_err(|e| e.to_string());
    let model = || model.as_ref().map_err(|e| Error::Construction(e.clone()));
    r.law(
        "the square for the ring is a pullback",
        "unit square is a pullback",
        || {
            let m = model()?;
            let t = Tally {
                checked: 1,
                ..Tally::default()
            };
            require!(
                t,
                connected_round_trip(m, &ConnectedObject::unit(m)?)?,
                "unit object"
            );
            Ok(t)
        },
    );
    r.law(
        "Γ q_!^d and e invert each other on hand-built objects",
        "infinite fibers: the model equivalence",
        || {
            let m = model()?;
            let mut t = Tally::default();
            for (name, a) in hand_built_objects(m)? {
                t.checked += 1;
                require!(t, toral_round_trip(m, &a)?, "{name}: e Γ A → A");
                let c = rank1_gamma_qd(m, &a)?.object;
                require!(t, connected_round_trip(m, &c)?, "{name}: C → Γ e C");
            }
            Ok(t)
        },
    );
    r.law(
        "malformed objects are rejected",
        "almost-everywhere conditions",
        || {
            let m = model()?;
            let mut t = Tally::default();
            for (name, res) in rejected_objects(m) {
                t.checked += 1;
                if res.is_ok() {
                    return Ok(t.fail(format!("{name} was accepted")));
                }
            }
            Ok(t)
        },
    );
    r.law(
        "localized product is strictly smaller than the product of localizations",
        "strict inclusion of localized products",
        || {
            let m = model()?;
            let x = strictness_witness(m);
            let t = Tally {
                checked: 1,
                ..Tally::default()
            };
            if !x.in_product_of_localizations()
                || x.in_localized_product()
                || x.clearing_euler_family(m).is_some()
            {
                return Ok(t.fail("the witness family does not separate the two rings"));
            }
            Ok(t)
        },
    );
}

// ---------------------------------------------------------------- gamma

fn zero_section(m: &ModuleDiagram, d: i64) -> Result<Vec<Vec<Elem>>> {
    let idx = m.ring().index();
    let w = m.window();
    (0..idx.base().len())
        .map(|k| {
            m.value(idx.diagonal(k))
                .components()
                .iter()
                .map(|c| c.zero_elem(w, d))
                .collect()
        })
        .collect()
}

/// Every basis map from the free module on `degrees` to `m` lifts through λ,
/// and the Hom spaces into `Γ_v m` and `m` have the same dimension.
fn hom_bijection(m: &ModuleDiagram, degrees: &[i64]) -> Result<Option<String>> {
    let g = gamma_v(m)?;
    if !g.uniqueness_certified() {
        return Ok(Some("pullback inclusions are not injective".into()));
    }
    let t = free_module(m.ring(), degrees, m.window())?;
    let per = degrees
        .iter()
        .map(|&d| sections(m, d))
        .collect::<Result<Vec<_>>>()?;
    for (&d, s) in degrees.iter().zip(&per) {
        let gs = sections(&g.module, d)?;
        if gs.len() != s.len() {
            return Ok(Some(format!(
                "degree {d}: {} sections of Γ_v M, {} of M",
                gs.len(),
                s.len()
            )));
        }
    }
    let zeros = degrees
        .iter()
        .map(|&d| zero_section(m, d))
        .collect::<Result<Vec<_>>>()?;
    for (i, s) in per.iter().enumerate() {
        for x in s {
            let mut chosen = zeros.clone();
            chosen[i] = x.clone();
            let map = section_map(&t, degrees, &chosen, m)?;
            g.lift(&t, &map, m)?;
        }
    }
    Ok(None)
}

fn gamma(r: &mut Runner, corp: &Result<Corpora>) {
    let inst = r.inst;
    if !finite_rank1(inst) {
        r.not_applicable("all Γ_v laws", "Γ_v needs node rings of finite type");
        return;
    }
    r.law("Γ_v output is extended", "Γ_v is extended", || {
        let mut t = Tally::default();
        for e in corpus_or_err(corp)?.all() {
            t.checked += 1;
            let g = gamma_v(&e.module)?;
            require!(
                t,
                is_extended(&g.module)?.witness(),
                "{} ({:?})",
                e.name,
                e.side
            );
        }
        Ok(t)
    });
    r.law(
        "λ is an isomorphism exactly on extended modules",
        "Γ_v fixes extended modules",
        || {
            let mut t = Tally::default();
            for e in corpus_or_err(corp)?.all() {
                t.checked += 1;
                let g = gamma_v(&e.module)?;
                let iso = g.lambda.iso_defect(&g.module, &e.module)?;
                let ext = is_extended(&e.module)?;
                if ext.passed() != iso.is_none() {
                    return Ok(t.fail(format!(
                        "{} ({:?}): extended = {}, λ defect = {}",
                        e.name,
                        e.side,
                        ext.passed(),
                        iso.unwrap_or_else(|| "none".into())
                    )));
                }
            }
            Ok(t)
        },
    );
    r.law(
        "maps from extended modules lift uniquely through λ",
        "Γ_v is right adjoint to the inclusion",
        || {
            let mut t = Tally::default();
            let corp = corpus_or_err(corp)?;
            let modules = corp
                .connected
                .iter()
                .take(3)
                .chain(corp.toral.iter().take(2));
            for e in modules {
                for degrees in [vec![0], vec![2, -2]] {
                    t.checked += 1;
                    require!(
                        t,
                        hom_bijection(&e.module, &degrees)?,
                        "{} ({:?}) from free{degrees:?}",
                        e.name,
                        e.side
                    );
                }
            }
            Ok(t)
        },
    );
    r.law(
        "Γ_d fixes extended p-modules",
        "the dimension-flag model",
        || {
            let mut t = Tally::default();
            let push = &inst.d_flags;
            for e in &corpus_or_err(corp)?.connected {
                if !is_qce(&e.module)?.passed() {
                    t.skipped += 1;
                    continue;
                }
                t.checked += 1;
                let n = pi_shriek_e(push, &e.module)?.module;
                let gd = gamma_d(push, &n)?;
                require!(
                    t,
                    gd.to_input.iso_defect(&gd.module, &n)?,
                    "{}: Γ_d N → N",
                    e.name
                );
            }
            Ok(t)
        },
    );
}
