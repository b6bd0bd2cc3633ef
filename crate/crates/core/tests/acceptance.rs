//! One line per acceptance criterion, on the rank-1 universe {1, C2, C3, T}
//! and the closed rank-2 universe.

use std::time::{Duration, Instant};

use torus_models::harness::{run_suite, Config, Instance, LawReport, Status, Suite, UniverseSpec};
use torus_models::lattice::ClosedSubgroup;
use torus_models::ring::borel::power_of_faithful;
use torus_models::ring::{euler_class, Poly, Q};

/// Wall-clock budget per suite, both instances together.
const SUITE_BUDGET: Duration = Duration::from_secs(60);
/// Corpus modules the middle-independence law must see, per instance.
const MIN_QC_MODULES: usize = 50;
/// Modules each adjunction law must see, per instance.
const MIN_ADJUNCTION_MODULES: usize = 20;
const HAND_BUILT_OBJECTS: usize = 10;
const HOM_PAIRS: usize = 10;

struct Run {
    rank1: LawReport,
    rank2: LawReport,
    elapsed: Duration,
}

fn run(insts: &[Instance; 2], suite: Suite) -> Run {
    let start = Instant::now();
    let rank1 = run_suite(&insts[0], suite);
    let rank2 = run_suite(&insts[1], suite);
    Run {
        rank1,
        rank2,
        elapsed: start.elapsed(),
    }
}

/// Problems found while checking one criterion.
#[derive(Default)]
struct Verdict {
    problems: Vec<String>,
    notes: Vec<String>,
}

impl Verdict {
    fn law(&mut self, report: &LawReport, name: &str, min_checked: usize) {
        match report.law(name) {
            None => self.problems.push(format!("law {name:?} missing")),
            Some(l) => {
                if l.status != Status::Pass {
                    self.problems.push(format!(
                        "{}: {name}: {} {}",
                        l.instance,
                        l.status,
                        l.witness.clone().unwrap_or_default()
                    ));
                } else if l.checked < min_checked {
                    self.problems.push(format!(
                        "{}: {name}: only {} cases (need {min_checked})",
                        l.instance, l.checked
                    ));
                } else {
                    self.notes.push(format!("{}:{}", l.instance, l.checked));
                }
            }
        }
    }

    fn both(&mut self, r: &Run, name: &str, min_checked: usize) {
        self.law(&r.rank1, name, min_checked);
        self.law(&r.rank2, name, min_checked);
    }

    fn budget(&mut self, r: &Run) {
        if r.elapsed > SUITE_BUDGET {
            self.problems
                .push(format!("took {:?}, budget {SUITE_BUDGET:?}", r.elapsed));
        }
    }

    fn print(&self, n: usize, title: &str, elapsed: Duration) -> bool {
        let ok = self.problems.is_empty();
        let detail = if ok {
            format!("cases {}", self.notes.join(" "))
        } else {
            self.problems.join("; ")
        };
        println!(
            "{} [{n}] {title} ({:.1} s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        ok
    }
}

fn posets(insts: &[Instance; 2]) -> bool {
    let r = run(insts, Suite::Posets);
    let mut v = Verdict::default();
    v.both(&r, "cotoral order agrees with the lattice oracle", 1);
    v.law(
        &r.rank1,
        "in the circle every proper subgroup lies only under the torus",
        16,
    );
    v.both(&r, "universe is closed", 1);
    v.both(&r, "cleavage along identity components", 1);
    v.both(&r, "cleavage along dimension", 1);
    v.budget(&r);
    v.print(
        1,
        "posets: cotoral order, circle shape, cleavage",
        r.elapsed,
    )
}

fn euler(insts: &[Instance; 2]) -> bool {
    let r = run(insts, Suite::Euler);
    let mut v = Verdict::default();
    v.both(&r, "transitivity on every chain of the cotoral poset", 1);
    v.both(&r, "transitivity on every chain of the connected poset", 1);
    v.both(&r, "Euler class dichotomy", 2);
    v.both(
        &r,
        "Euler variants give the same localizations on every flag",
        1,
    );
    // the two values on C2 exactly
    let c2 = ClosedSubgroup::cyclic(2);
    let one = ClosedSubgroup::trivial(1);
    let at = |n| euler_class(&power_of_faithful(&one, n).unwrap(), &c2, &one).unwrap();
    if at(2) != Poly::linear(&[Q::from_integer(2.into())]) {
        v.problems.push(format!("c(z^2)(C2) = {:?}", at(2)));
    }
    if at(3) != Poly::one(1) {
        v.problems.push(format!("c(z^3)(C2) = {:?}", at(3)));
    }
    v.budget(&r);
    v.print(
        2,
        "euler: transitivity, C2 dichotomy 2c / 1, variants agree",
        r.elapsed,
    )
}

fn predicates(insts: &[Instance; 2]) -> bool {
    let r = run(insts, Suite::Predicates);
    let mut v = Verdict::default();
    v.both(&r, "the ring diagrams are qce", 2);
    v.law(&r.rank1, "torsion modules get the oracle verdicts", 1);
    v.both(&r, "qc modules are middle-independent", MIN_QC_MODULES);
    v.budget(&r);
    v.print(
        3,
        "predicates: ring qce, torsion verdicts, qc ⇒ middle-independent",
        r.elapsed,
    )
}

fn adjunctions(insts: &[Instance; 2]) -> bool {
    let r = run(insts, Suite::Adjunctions);
    let mut v = Verdict::default();
    v.both(&r, "e after π_! is the identity", MIN_ADJUNCTION_MODULES);
    for law in [
        "triangle identities for π_* and e",
        "triangle identities for e and π_!",
        "triangle identities for e and π_!^e on flags",
        "triangle identities for e and q_!^d on pairs",
    ] {
        v.both(&r, law, MIN_ADJUNCTION_MODULES);
    }
    v.budget(&r);
    v.print(
        4,
        "adjunctions: e π_! = 1 and four sets of triangle identities",
        r.elapsed,
    )
}

fn equivalences(insts: &[Instance; 2]) -> bool {
    let r = run(insts, Suite::Equivalences);
    let mut v = Verdict::default();
    v.both(&r, "f and p are inverse on middle-independent modules", 1);
    v.both(&r, "π_!^e and e are inverse on flags", 1);
    v.both(&r, "π_!^e and e are inverse on pairs", 1);
    v.law(&r.rank1, "Γ_v q_!^d and e are inverse", 1);
    v.budget(&r);
    v.print(
        5,
        "equivalences: f/p, π_!^e/e on flags and pairs, Γ_v q_!^d / e",
        r.elapsed,
    )
}

fn rank1_model(insts: &[Instance; 2]) -> bool {
    let start = Instant::now();
    let report = run_suite(&insts[0], Suite::Rank1);
    let r = Run {
        rank1: report,
        rank2: LawReport::default(),
        elapsed: start.elapsed(),
    };
    let mut v = Verdict::default();
    v.law(&r.rank1, "the square for the ring is a pullback", 1);
    v.law(
        &r.rank1,
        "Γ q_!^d and e invert each other on hand-built objects",
        HAND_BUILT_OBJECTS,
    );
    v.law(&r.rank1, "malformed objects are rejected", 1);
    v.law(
        &r.rank1,
        "localized product is strictly smaller than the product of localizations",
        1,
    );
    v.budget(&r);
    v.print(
        6,
        "rank 1 with infinite fibers: pullback, round trips, strictness",
        r.elapsed,
    )
}

fn gamma(insts: &[Instance; 2]) -> bool {
    let start = Instant::now();
    let report = run_suite(&insts[0], Suite::Gamma);
    let r = Run {
        rank1: report,
        rank2: LawReport::default(),
        elapsed: start.elapsed(),
    };
    let mut v = Verdict::default();
    v.law(&r.rank1, "Γ_v output is extended", 1);
    v.law(
        &r.rank1,
        "λ is an isomorphism exactly on extended modules",
        1,
    );
    v.law(
        &r.rank1,
        "maps from extended modules lift uniquely through λ",
        HOM_PAIRS,
    );
    v.budget(&r);
    v.print(
        7,
        "Γ_v: extended output, λ iso on extended inputs, Hom bijection",
        r.elapsed,
    )
}

fn main() {
    let config = Config::default();
    let insts = [
        Instance::build(UniverseSpec::Rank1, config).expect("rank-1 instance"),
        Instance::build(UniverseSpec::Rank2, config).expect("rank-2 instance"),
    ];
    let results = [
        posets(&insts),
        euler(&insts),
        predicates(&insts),
        adjunctions(&insts),
        equivalences(&insts),
        rank1_model(&insts),
        gamma(&insts),
    ];
    let passed = results.iter().filter(|&&x| x).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
