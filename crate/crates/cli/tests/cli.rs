use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-models"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_summarizes_the_circle() {
    let o = run(&["build"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("universe: 1, C2, C3, T"), "{s}");
    assert!(s.contains("cotoral 4"), "{s}");
}

#[test]
fn build_json_carries_the_config() {
    let o = run(&[
        "--window",
        "-4..8",
        "--seed",
        "7",
        "--json",
        "build",
        "--universe",
        "rank2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["window"]["lo"], -4);
}

#[test]
fn passing_check_exits_zero() {
    let o = run(&["check", "--suite", "posets", "--suite", "euler"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("12/12 laws pass"));
}

#[test]
fn mutated_check_exits_one_with_a_witness() {
    let o = run(&[
        "--json",
        "check",
        "--suite",
        "euler",
        "--mutate",
        "zero-euler",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&serde_json::Value> = v["laws"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["status"] == "fail")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed[0]["witness"].as_str().unwrap().contains("zero"));
}

#[test]
fn bad_window_is_a_usage_error() {
    let o = run(&["--window", "5..1", "build"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construction_errors_exit_two() {
    // pair categories are not built over the dimension poset
    let o = run(&["export", "pair-dot", "--poset", "d"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = run(&[
        "export",
        "diagram-json",
        "--module",
        "torsion:NOPE:2",
        "--diagram",
        "af",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn poset_dot_is_byte_stable() {
    let a = stdout(&run(&["export", "poset-dot"]));
    let b = stdout(&run(&["export", "poset-dot"]));
    assert_eq!(a, b);
    assert_eq!(a.matches("-> n3").count(), 3);
}

#[test]
fn export_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traces.json");
    let o = run(&["export", "traces", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
}

#[test]
fn report_json_is_deterministic() {
    let args = [
        "export",
        "report-json",
        "--suite",
        "predicates",
        "--universe",
        "minimal",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args)));
}

#[test]
fn demo_rank1_passes() {
    let o = run(&["demo", "rank1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("in the localized product false"), "{s}");
    assert!(!s.contains("FAILS"));
}
