//! Operator-norm Trotter product formula laboratory.

pub mod error;
pub mod evolution;
pub mod experiment;
pub mod operator;
pub mod battery;
pub mod checks;
pub mod quadrature;
pub mod trotter;

pub use error::{Error, Result};
pub use operator::{DenseMatrix, GeneratorSpec, NormKind};
