use torus_models::diagram::{is_qce, ModuleDiagram};
use torus_models::functors::*;
use torus_models::harness::{Config, Instance, UniverseSpec};

fn instances() -> Vec<Instance> {
    [
        UniverseSpec::Minimal,
        UniverseSpec::Rank1,
        UniverseSpec::Rank2,
    ]
    .into_iter()
    .map(|s| Instance::build(s, Config::default()).unwrap())
    .collect()
}

#[test]
fn e_after_shriek_is_identity_on_rings() {
    for inst in instances() {
        let w = inst.window();
        for push in [&inst.q_flags, &inst.q_pairs, &inst.d_flags] {
            let m = ModuleDiagram::ring_module(push.src().clone(), w).unwrap();
            let pm = pi_shriek(push, &m).unwrap();
            let back = apply_e(push, &pm).unwrap();
            assert!(same_module(&back, &m).unwrap(), "{}", inst.name);
        }
    }
}

#[test]
fn adapted_counit_and_unit_on_rings() {
    for inst in instances() {
        let w = inst.window();
        for push in [&inst.q_flags, &inst.q_pairs, &inst.d_flags] {
            let m = ModuleDiagram::ring_module(push.src().clone(), w).unwrap();
            let a = pi_shriek_e(push, &m).unwrap();
            let eps = adapted_counit(push, &a, &m).unwrap();
            let em = apply_e(push, &a.module).unwrap();
            assert_eq!(eps.iso_defect(&em, &m).unwrap(), None);
            let n = ModuleDiagram::ring_module(push.tgt().clone(), w).unwrap();
            let (eta, a, _) = adapted_unit(push, &n).unwrap();
            assert_eq!(eta.iso_defect(&n, &a.module).unwrap(), None);
            assert!(is_qce(&m).unwrap().passed());
        }
    }
}

#[test]
fn gamma_v_rank1() {
    use torus_models::diagram::is_extended;
    use torus_models::harness::{corpus, Side};
    let inst = Instance::build(UniverseSpec::Rank1, Config::default()).unwrap();
    for side in [Side::Toral, Side::Connected] {
        for e in corpus(&inst, side, 4, 3).unwrap() {
            let g = gamma_v(&e.module).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(is_extended(&g.module).unwrap().passed(), "{}", e.name);
            let iso = g.lambda.iso_defect(&g.module, &e.module).unwrap();
            let ext = is_extended(&e.module).unwrap().passed();
            println!(
                "{side:?} {}: extended={ext} λ-iso={}",
                e.name,
                iso.is_none()
            );
            assert_eq!(ext, iso.is_none(), "{}: {iso:?}", e.name);
            assert!(g.uniqueness_certified());
        }
    }
}

#[test]
fn gamma_v_hom_bijection() {
    use torus_models::harness::{corpus, free_module, Side};
    let inst = Instance::build(UniverseSpec::Rank1, Config::default()).unwrap();
    let w = inst.window();
    for e in corpus(&inst, Side::Connected, 2, 5).unwrap() {
        let g = gamma_v(&e.module).unwrap();
        for degrees in [vec![0], vec![2, -2]] {
            let t = free_module(&inst.r_cf, &degrees, w).unwrap();
            let per: Vec<_> = degrees
                .iter()
                .map(|&d| sections(&e.module, d).unwrap())
                .collect();
            let gper: Vec<_> = degrees
                .iter()
                .map(|&d| sections(&g.module, d).unwrap())
                .collect();
            for (a, b) in per.iter().zip(&gper) {
                assert_eq!(a.len(), b.len(), "{}", e.name);
            }
            if per.iter().any(|s| s.is_empty()) {
                continue;
            }
            let chosen: Vec<_> = per.iter().map(|s| s[s.len() - 1].clone()).collect();
            let gm = section_map(&t, &degrees, &chosen, &e.module).unwrap();
            // lift() itself checks that λ recovers the map
            g.lift(&t, &gm, &e.module).unwrap();
        }
    }
}
