use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use torus_models::diagram::{is_qce, ModuleDiagram};
use torus_models::functors::{gamma_v, pi_shriek_e};
use torus_models::harness::{gen_module, run_suite, ModuleKind, Side, Suite, UniverseSpec};
use torus_models::lattice::{close_universe, ClosedSubgroup};
use torus_models_bench::instance;

fn lattice(c: &mut Criterion) {
    let gens = UniverseSpec::Rank2.generators();
    c.bench_function("close rank-2 universe", |b| {
        b.iter(|| close_universe(black_box(&gens), 64).unwrap())
    });
    let h1 = ClosedSubgroup::from_annihilator("H1", 2, &[vec![0, 1]]);
    let c2 = ClosedSubgroup::from_annihilator("C2x1", 2, &[vec![2, 0], vec![0, 1]]);
    c.bench_function("join_istar", |b| {
        b.iter(|| black_box(&c2).join_istar(black_box(&h1)).unwrap())
    });
}

fn instances(c: &mut Criterion) {
    c.bench_function("build rank-1 instance", |b| {
        b.iter(|| instance(UniverseSpec::Rank1))
    });
    c.bench_function("build rank-2 instance", |b| {
        b.iter(|| instance(UniverseSpec::Rank2))
    });
}

fn functors(c: &mut Criterion) {
    let inst = instance(UniverseSpec::Rank1);
    let w = inst.window();
    let ring = ModuleDiagram::ring_module(inst.r_af.clone(), w).unwrap();
    let ambient = gen_module(
        inst.side(Side::Connected),
        &ModuleKind::Ambient {
            seed: 3,
            extended: true,
        },
        w,
    )
    .unwrap();
    c.bench_function("is_qce on an ambient module", |b| {
        b.iter(|| is_qce(black_box(&ambient)).unwrap())
    });
    c.bench_function("pi_!^e of the toral ring", |b| {
        b.iter(|| pi_shriek_e(&inst.q_flags, black_box(&ring)).unwrap())
    });
    c.bench_function("gamma_v of an ambient module", |b| {
        b.iter(|| gamma_v(black_box(&ambient)).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let inst = instance(UniverseSpec::Rank1);
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for s in [Suite::Posets, Suite::Euler, Suite::Predicates] {
        g.bench_function(s.name(), |b| b.iter(|| run_suite(&inst, s)));
    }
    g.finish();
}

criterion_group!(benches, lattice, instances, functors, suites);
criterion_main!(benches);
