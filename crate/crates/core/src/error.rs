use thiserror::Error;

/// Errors raised by the algebra, solver and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("odd dimension {0}: expected a 2n x 2n complex matrix")]
    OddDimension(usize),

    #[error("matrix is not self-adjoint")]
    NotHermitian,

    #[error("matrix is not skew-adjoint")]
    NotSkew,

    #[error("matrix is not normal")]
    NotNormal,

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("complex matrix does not lie in the image of the quaternionic embedding")]
    NotInEmbeddingImage,

    #[error("eigensolver failed to converge")]
    Convergence,

    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    #[error("commutation defect is nonzero: {0}")]
    NonzeroDefect(String),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("no commuting R-linear correspondence exists for quaternionic dimension {0} (only the zero map)")]
    NoDynamics(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(expected: impl std::fmt::Display, found: impl std::fmt::Display) -> Error {
    Error::ShapeMismatch { expected: expected.to_string(), found: found.to_string() }
}
