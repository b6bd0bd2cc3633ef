//! Diagrams of rings over flag and pair categories and modules over them.

mod index;
mod json;
mod module;
mod predicate;
mod ring;

pub use index::{EdgeKind, Index};
pub use json::{ModuleDiagramJson, Trace};
pub use module::{DiagramMorphism, ModuleDiagram};
pub use predicate::{
    extension_defect, is_extended, is_middle_independent, is_qc, is_qce, phi, PredicateReport,
    Verdict,
};
pub(crate) use ring::{chain_flag, flag_of_pair, pair_of_flag};
pub use ring::{Flavor, RingDiagram};
