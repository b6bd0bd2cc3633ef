//! Graded modules over component rings and their finite products.

pub mod comp;
pub mod pieces;
pub mod value;

pub use comp::{action_matrix, det, Backend, CompMap, CompModule, Elem, Extension};
pub use pieces::{Pieces, Presentation, Window};
pub use value::{ModMap, ModuleValue, ValueElem};
