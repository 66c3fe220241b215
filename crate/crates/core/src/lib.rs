//! Exact computations with affine vertex operator algebras, their twisted
//! modules and twisted Zhu algebras.

pub mod context;
pub mod error;
pub mod hwmodule;
pub mod liealg;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod text;
pub mod twisted;
pub mod uea;
pub mod voa;
pub mod zhu;

pub use error::{Error, Result};
