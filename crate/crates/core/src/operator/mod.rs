//! Dense matrix primitives standing in for semigroup generators.

mod expm;
mod frac;
pub(crate) mod linalg;
mod matrix;
pub(crate) mod norms;

pub use expm::{expm, expm_matrix};
pub use frac::{balakrishnan_quadrature, frac_power, gamma_neg, BALAKRISHNAN_TOL};
pub use linalg::{inverse, resolvent, MAX_CONDITION};
pub use matrix::{DenseMatrix, GeneratorSpec, NormKind, ACCRETIVE_TOL, NORMAL_TOL};
pub(crate) use matrix::{identity, scale};
pub use norms::op_norm;
