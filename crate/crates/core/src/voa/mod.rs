//! Affine vertex operator algebras and their (twisted) modules.

pub mod module;
pub mod shapovalov;
pub mod vertex;

pub use module::{Gen, InducedModule, State};
pub use shapovalov::{Radical, Shapovalov};
pub use vertex::{conformal_vector, VertexOps};
