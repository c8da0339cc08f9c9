pub mod algebra;
pub mod axiom;
pub mod bits;
pub mod catalog;
pub mod error;
pub mod frame;
pub mod projectivity;
pub mod unification;
pub mod verify;

pub use algebra::{cf, cm, AlgHom, ClosedIdeal, ClosureAlgebra, HomKind};
pub use bits::{Element, PointSet, MAX_POINTS};
pub use error::{Error, Result};
pub use frame::{Frame, Morphism, UnificationType};
