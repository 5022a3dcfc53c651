//! Quaternionic matrix algebra, dynamical correspondences and their exact
//! classification.

pub mod compression;
pub mod correspondence;
pub mod error;
pub mod evolution;
pub mod json;
pub mod kernelsolver;
pub mod linsolve;
pub mod qmatrix;
pub mod quaternion;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use qmatrix::{CMatrix, QMatrix, QVector};
pub use quaternion::Quaternion;
pub use scalar::{Rational, Scalar};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
