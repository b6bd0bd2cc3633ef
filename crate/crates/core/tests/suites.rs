use torus_models::harness::*;

fn rank1() -> Instance {
    Instance::build(UniverseSpec::Rank1, Config::default()).unwrap()
}

#[test]
fn rank1_full_run_passes() {
    let inst = rank1();
    let report = run_suites(&inst, &Suite::ALL);
    assert!(report.all_passed(), "{}", report.render_text(false));
    assert!(report.not_applicable.is_empty());
    for s in Suite::ALL {
        assert!(report.laws.iter().any(|l| l.suite == s), "{s} ran no laws");
    }
}

#[test]
fn zero_euler_generator_fails_the_euler_suite() {
    let inst = with_zero_euler_generator(&rank1());
    let report = run_suite(&inst, Suite::Euler);
    let law = report
        .law("Euler generators are certified nonzero")
        .unwrap();
    assert_eq!(law.status, Status::Fail);
    assert!(
        law.witness.as_deref().unwrap().contains("is zero"),
        "{:?}",
        law.witness
    );
    let chains = report
        .law("transitivity on every chain of the cotoral poset")
        .unwrap();
    assert_eq!(chains.status, Status::Uncertified);
    assert!(report.any_failed());
    // the connected side is untouched
    assert_eq!(
        report
            .law("transitivity on every chain of the connected poset")
            .unwrap()
            .status,
        Status::Pass
    );
}

#[test]
fn empty_selection_gives_empty_report() {
    let report = run_suites(&rank1(), &[]);
    assert!(report.laws.is_empty() && report.all_passed());
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let inst = rank1();
    let a = run_suites(&inst, &[Suite::Posets, Suite::Euler, Suite::Predicates]);
    let b = run_suites(&inst, &[Suite::Posets, Suite::Euler, Suite::Predicates]);
    let text = a.to_json_string().unwrap();
    assert_eq!(text, b.to_json_string().unwrap());
    assert!(!text.contains("wall_ms"));
    assert_eq!(
        LawReport::from_json_str(&text).unwrap(),
        a.without_timings()
    );
    assert!(a.laws.iter().all(|l| !l.anchor.is_empty()));
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("topology".parse::<Suite>().is_err());
}

#[test]
fn rank2_laws_pass_where_defined() {
    let inst = Instance::build(UniverseSpec::Rank2, Config::default()).unwrap();
    let report = run_suites(&inst, &[Suite::Posets, Suite::Euler, Suite::Predicates]);
    assert!(report.all_passed(), "{}", report.render_text(false));
    // no rank-1 shape law in rank 2, and no torsion in the corpus
    assert!(report
        .law("in the circle every proper subgroup lies only under the torus")
        .is_none());
    assert_eq!(report.not_applicable.len(), 1);
}
