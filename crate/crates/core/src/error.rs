use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Lie type {label}{rank}")]
    InvalidType { label: String, rank: usize },
    #[error("permutation {0:?} is not a Dynkin diagram symmetry")]
    NotDiagramSymmetry(Vec<usize>),
    #[error("automorphism error: {0}")]
    Automorphism(String),
    #[error("level equals minus the dual Coxeter number")]
    CriticalLevel,
    #[error("weight {weight} exceeds the truncation depth {cap}")]
    Truncation { weight: String, cap: String },
    #[error("mixed ambient algebras")]
    MixedAlgebras,
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("vector is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("mode index {mode} does not match eigenvalue class {class}")]
    ClassMismatch { mode: String, class: String },
    #[error("element is not in the fixed subalgebra")]
    NotFixed,
    #[error("zero vector has no block size")]
    ZeroVector,
    #[error("weight is not dominant integral: {0}")]
    NotDominant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coefficient window too small: {0}")]
    Window(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
