//! Instances, the module corpus and the law suites.

mod corpus;
mod export;
mod instance;
pub mod oracle;
mod suites;

pub use corpus::{
    ambient, corpus, free_module, gen_module, kind_name, skyscraper, topless, torsion, AmbientData,
    Coefficients, CorpusEntry, ModuleKind, Side,
};
pub use export::{
    diagram_json, flag_dot_of, functor_traces, instance_json, pair_dot_of, poset_dot_of, pretty,
    report_json, DiagramChoice, InstanceJson, PosetChoice,
};
pub use instance::{Config, Instance, UniverseSpec, FLAG_CAP, UNIVERSE_CAP};
pub use suites::{
    run_suite, run_suites, with_zero_euler_generator, LawReport, LawResult, Status, Suite,
    AMBIENT_PER_SIDE,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_instances_build() {
        for spec in [
            UniverseSpec::Minimal,
            UniverseSpec::Rank1,
            UniverseSpec::Rank2,
        ] {
            let inst = Instance::build(spec, Config::default())
                .unwrap_or_else(|e| panic!("{spec:?}: {e}"));
            assert_eq!(inst.sigma_a.len(), inst.universe.len());
        }
    }

    #[test]
    fn qce_corpus_members_are_qc_and_middle_independent() {
        use crate::diagram::{is_middle_independent, is_qc, is_qce};
        for spec in [UniverseSpec::Rank1, UniverseSpec::Rank2] {
            let inst = Instance::build(spec, Config::default()).unwrap();
            for side in [Side::Toral, Side::Connected] {
                for e in corpus(&inst, side, 6, 7).unwrap() {
                    if is_qce(&e.module).unwrap().passed() {
                        assert!(is_qc(&e.module).unwrap().passed(), "{}", e.name);
                        assert!(is_middle_independent(&e.module).unwrap().passed(), "{}", e.name);
                    }
                }
            }
        }
    }
}
