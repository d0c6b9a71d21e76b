use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix, row/column storage handled by nalgebra.
pub type DenseMatrix = DMatrix<Complex64>;

/// Tolerance on the minimum eigenvalue of the Hermitian part for accretivity.
pub const ACCRETIVE_TOL: f64 = 1e-10;
/// Tolerance on the commutator `AA* - A*A` for normality.
pub const NORMAL_TOL: f64 = 1e-10;

/// Induced operator norm, restricted to the three cheaply computable cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Inf,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::One => "1",
            NormKind::Two => "2",
            NormKind::Inf => "inf",
        }
    }
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A matrix standing in for a semigroup generator, with the classification
/// data the bound checks need.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    matrix: DenseMatrix,
    is_accretive: bool,
    is_normal: bool,
    sector_semi_angle: Option<f64>,
    bound_constant: f64,
}

impl GeneratorSpec {
    /// Classify `matrix`. For accretive inputs the semigroup bound is 1; otherwise
    /// it is estimated as the largest `‖e^{-tA}‖₂` on a log grid in `t`, which can
    /// only under-estimate the true supremum.
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        validate_square(&matrix)?;
        let is_accretive = hermitian_part_min_eig(&matrix) >= -ACCRETIVE_TOL;
        let is_normal = is_normal(&matrix);
        let sector_semi_angle = if is_normal {
            Some(sector_angle_of_normal(&matrix))
        } else {
            None
        };
        let bound_constant = if is_accretive {
            1.0
        } else {
            estimate_semigroup_bound(&matrix)?
        };
        Ok(Self {
            matrix,
            is_accretive,
            is_normal,
            sector_semi_angle,
            bound_constant,
        })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_real(&DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_real(&DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    pub fn complex_diagonal(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_accretive(&self) -> bool {
        self.is_accretive
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn sector_semi_angle(&self) -> Option<f64> {
        self.sector_semi_angle
    }

    /// `C_A ≥ 1` with `‖e^{-tA}‖ ≤ C_A` for `t ≥ 0`.
    pub fn bound_constant(&self) -> f64 {
        self.bound_constant
    }

    /// `A + shift·I`, reclassified.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        let n = self.dim();
        let mut m = self.matrix.clone();
        for i in 0..n {
            m[(i, i)] += Complex64::new(shift, 0.0);
        }
        Self::new(m)
    }

    /// Sum of two generators of equal dimension.
    pub fn sum(&self, other: &GeneratorSpec) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{} generators",
                self.dim(),
                self.dim(),
                other.dim(),
                other.dim()
            )));
        }
        Self::new(&self.matrix + &other.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        let a = &self.matrix;
        let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (a - a.adjoint()).iter().all(|z| z.norm() <= 1e-12 * scale)
    }
}

pub(crate) fn validate_square(m: &DenseMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    validate_finite(m)
}

pub(crate) fn validate_finite(m: &DenseMatrix) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix has NaN or infinite entries".into()));
    }
    Ok(())
}

pub(crate) fn identity(n: usize) -> DenseMatrix {
    DenseMatrix::identity(n, n)
}

pub(crate) fn scale(m: &DenseMatrix, s: f64) -> DenseMatrix {
    m * Complex64::new(s, 0.0)
}

fn hermitian_part_min_eig(a: &DenseMatrix) -> f64 {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

fn is_normal(a: &DenseMatrix) -> bool {
    let comm = a * a.adjoint() - a.adjoint() * a;
    let scale = a.norm().powi(2).max(1.0);
    comm.norm() <= NORMAL_TOL * scale
}

/// `π/2 − max |arg λ|` over the non-zero spectrum, clamped to `[0, π/2]`.
pub(crate) fn sector_angle_of_normal(a: &DenseMatrix) -> f64 {
    let eigs = super::linalg::eigenvalues(a);
    let scale = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_arg = eigs
        .iter()
        .filter(|z| z.norm() > 1e-12 * scale.max(1e-300))
        .map(|z| z.arg().abs())
        .fold(0.0, f64::max);
    (std::f64::consts::FRAC_PI_2 - max_arg).clamp(0.0, std::f64::consts::FRAC_PI_2)
}

fn estimate_semigroup_bound(a: &DenseMatrix) -> Result<f64> {
    let mut best: f64 = 1.0;
    for i in 0..=200 {
        let t = 10f64.powf(-4.0 + 6.0 * i as f64 / 200.0);
        let u = super::expm::expm_matrix(a, t)?;
        best = best.max(super::norms::norm(&u, NormKind::Two));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_of_simple_generators() {
        let a = GeneratorSpec::diagonal(&[1.0, 2.0]).unwrap();
        assert!(a.is_accretive());
        assert!(a.is_normal());
        assert_eq!(a.bound_constant(), 1.0);

        let jordan = GeneratorSpec::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(!jordan.is_normal());
        assert!(jordan.sector_semi_angle().is_none());
        // Hermitian part [[1, .5], [.5, 1]] is positive definite.
        assert!(jordan.is_accretive());

        let not_acc = GeneratorSpec::from_rows(&[&[0.0, 4.0], &[0.0, 0.0]]).unwrap();
        assert!(!not_acc.is_accretive());
        assert!(not_acc.bound_constant() > 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(GeneratorSpec::new(rect), Err(Error::Dimension(_))));
        let mut nan = DenseMatrix::zeros(2, 2);
        nan[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(GeneratorSpec::new(nan), Err(Error::InvalidInput(_))));
    }
}
