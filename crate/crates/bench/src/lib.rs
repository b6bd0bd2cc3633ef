//! Shared fixtures for the benchmarks.

use torus_models::harness::{Config, Instance, UniverseSpec};

pub fn instance(spec: UniverseSpec) -> Instance {
    Instance::build(spec, Config::default()).expect("standard instance builds")
}
