//! Rings of the models: polynomial rings with inverted linear forms, finite
//! products of them, Borel cohomology of torus quotients and Euler systems.

pub mod borel;
pub mod comp;
pub mod euler;
pub mod linalg;
pub mod poly;
pub mod product;

pub use borel::{connected_identification, euler_class, faithful_character, inflation, BorelRing};
pub use comp::{CompRing, CompRingMap, Fraction, Mono};
pub use euler::{transitivity_check, EulerSystem, EulerVariant, SplittingDiagram};
pub use linalg::{Echelon, QMatrix, QVec};
pub use poly::{q, Poly, Q};
pub use product::{ProductRing, RingElem, RingMap};
