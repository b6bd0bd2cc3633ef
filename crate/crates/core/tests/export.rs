use torus_models::diagram::ModuleDiagram;
use torus_models::functors::same_module;
use torus_models::harness::*;

fn rank1() -> Instance {
    Instance::build(UniverseSpec::Rank1, Config::default()).unwrap()
}

#[test]
fn rank1_cotoral_dot_points_at_the_torus() {
    let inst = rank1();
    let dot = poset_dot_of(&inst, PosetChoice::Cotoral);
    let top = inst.sigma_a.top();
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(edges.len(), 3);
    for e in edges {
        assert!(e.trim().ends_with(&format!("-> n{top};")), "{e}");
    }
    assert!(dot.contains("label=\"C2\""));
}

#[test]
fn dot_exports_are_byte_stable() {
    let a = rank1();
    let b = rank1();
    for which in [
        PosetChoice::Cotoral,
        PosetChoice::Connected,
        PosetChoice::Dimension,
    ] {
        assert_eq!(poset_dot_of(&a, which), poset_dot_of(&b, which));
        assert_eq!(flag_dot_of(&a, which), flag_dot_of(&b, which));
    }
    assert_eq!(
        pair_dot_of(&a, PosetChoice::Cotoral).unwrap(),
        pair_dot_of(&b, PosetChoice::Cotoral).unwrap()
    );
    assert!(pair_dot_of(&a, PosetChoice::Dimension).is_err());
}

#[test]
fn diagram_json_reloads_equal() {
    let inst = rank1();
    for side in [Side::Toral, Side::Connected] {
        let ring = inst.side(side).ring.clone();
        for e in corpus(&inst, side, 4, 9).unwrap() {
            let j = e.module.to_json().unwrap();
            let text = serde_json::to_string(&j).unwrap();
            let back =
                ModuleDiagram::from_json(&serde_json::from_str(&text).unwrap(), ring.clone())
                    .unwrap();
            assert!(same_module(&back, &e.module).unwrap(), "{}", e.name);
            assert_eq!(
                back.content_hash().unwrap(),
                e.module.content_hash().unwrap(),
                "{}",
                e.name
            );
        }
    }
}

#[test]
fn diagram_json_rejects_a_foreign_index() {
    let inst = rank1();
    let m = ModuleDiagram::ring_module(inst.r_af.clone(), inst.window()).unwrap();
    let j = m.to_json().unwrap();
    assert!(ModuleDiagram::from_json(&j, inst.r_cf.clone()).is_err());
}

#[test]
fn hashes_separate_modules() {
    let inst = rank1();
    let w = inst.window();
    let a = free_module(&inst.r_af, &[0], w).unwrap();
    let b = free_module(&inst.r_af, &[2], w).unwrap();
    assert_ne!(a.content_hash().unwrap(), b.content_hash().unwrap());
    assert_eq!(a.content_hash().unwrap().len(), 64);
}

#[test]
fn traces_are_reproducible() {
    let a = functor_traces(&rank1()).unwrap();
    let b = functor_traces(&rank1()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 10);
    // e π_! = 1 on the ring: the e trace returns to the input hash
    assert_eq!(a[1].output_hash, a[0].input_hash);
}

#[test]
fn instance_json_is_stable() {
    let a = pretty(&instance_json(&rank1()).unwrap()).unwrap();
    let b = pretty(&instance_json(&rank1()).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["universe"].as_array().unwrap().len(), 4);
    assert_eq!(v["sigma_a"]["relations"].as_array().unwrap().len(), 3);
}
