//! Exact models built from posets of closed subgroups of a torus: flag and
//! pair diagrams of graded rings with Euler-class localizations, modules over
//! them, and the comparison functors between module categories.

pub mod diagram;
pub mod error;
pub mod functors;
pub mod harness;
pub mod lattice;
pub mod modules;
pub mod poset;
pub mod ring;

pub use error::{Error, Result};
