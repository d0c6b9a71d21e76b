use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::matrix::{identity, validate_square, DenseMatrix, GeneratorSpec, NormKind};
use super::norms::norm;
use crate::error::{Error, Result};

/// Matrices with a 1-norm condition estimate above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e14;

/// Inverse via pivoted LU, rejecting near-singular inputs.
pub fn inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    validate_square(m)?;
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular { condition: f64::INFINITY })?;
    let condition = norm(m, NormKind::One) * norm(&inv, NormKind::One);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    Ok(inv)
}

/// `(A + zI)^{-1}`.
pub fn resolvent(a: &GeneratorSpec, z: Complex64) -> Result<DenseMatrix> {
    let n = a.dim();
    let shifted = a.matrix() + identity(n) * z;
    inverse(&shifted)
}

/// Eigenvalues from the complex Schur form.
pub(crate) fn eigenvalues(a: &DenseMatrix) -> Vec<Complex64> {
    let t = Schur::new(a.clone()).unpack().1;
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Eigendecomposition `A = V diag(λ) V^{-1}`.
pub(crate) struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: DenseMatrix,
    pub inverse_vectors: DenseMatrix,
}

/// Condition number of the eigenvector matrix above which the input is
/// treated as defective.
const DEFECTIVE_CONDITION: f64 = 1e10;

pub(crate) fn eigen_decompose(a: &GeneratorSpec) -> Result<Eigen> {
    if a.is_hermitian() {
        let eig = a.matrix().clone().symmetric_eigen();
        let vectors = eig.eigenvectors;
        let inverse_vectors = vectors.adjoint();
        let values = eig.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        return Ok(Eigen {
            values,
            vectors,
            inverse_vectors,
        });
    }

    let (q, t) = Schur::new(a.matrix().clone()).unpack();
    let n = t.nrows();
    let scale = norm(&t, NormKind::One).max(f64::MIN_POSITIVE);
    let mut y = DenseMatrix::zeros(n, n);
    // Back substitution on (T - λ_k I) y = 0 with y_k = 1.
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < 1e-14 * scale {
                // Repeated eigenvalue: perturb so a defective block shows up as
                // an ill-conditioned eigenvector matrix below.
                denom = Complex64::new(1e-14 * scale, 0.0);
            }
            y[(i, k)] = -acc / denom;
        }
        let col_norm = y.column(k).norm();
        y.column_mut(k).unscale_mut(col_norm);
    }
    let vectors = q * y;
    let inverse_vectors = vectors.clone().lu().try_inverse().ok_or_else(|| {
        Error::Unsupported("matrix is not diagonalizable (singular eigenvector basis)".into())
    })?;
    let cond = norm(&vectors, NormKind::One) * norm(&inverse_vectors, NormKind::One);
    if !cond.is_finite() || cond > DEFECTIVE_CONDITION {
        return Err(Error::Unsupported(format!(
            "matrix is numerically defective (eigenvector condition {cond:.3e})"
        )));
    }
    Ok(Eigen {
        values: (0..n).map(|i| t[(i, i)]).collect(),
        vectors,
        inverse_vectors,
    })
}

impl Eigen {
    /// `V diag(f(λ)) V^{-1}`.
    pub fn apply(&self, f: impl Fn(Complex64) -> Complex64) -> DenseMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= fk;
            }
        }
        scaled * &self.inverse_vectors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::norms::norm2;

    #[test]
    fn resolvent_examples() {
        let a = GeneratorSpec::diagonal(&[1.0]).unwrap();
        let r = resolvent(&a, Complex64::new(1.0, 0.0)).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-15);

        let a = GeneratorSpec::diagonal(&[1.0, 3.0]).unwrap();
        let r = resolvent(&a, Complex64::new(0.0, 0.0)).unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);

        // Direct 2×2 inverse: [[a, b], [0, d]]^{-1} = [[1/a, -b/(ad)], [0, 1/d]].
        let a = GeneratorSpec::from_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        let r = resolvent(&a, Complex64::new(0.0, 0.0)).unwrap();
        let expected = [[0.5, -0.25], [0.0, 0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[(i, j)].re - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn singular_resolvent_reports_condition() {
        let a = GeneratorSpec::diagonal(&[1.0, 2.0]).unwrap();
        match resolvent(&a, Complex64::new(-1.0, 0.0)) {
            Err(Error::Singular { .. }) => {}
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn eigen_decomposition_reconstructs_non_normal_matrix() {
        let a = GeneratorSpec::from_rows(&[&[2.0, 1.0, 0.0], &[0.0, 3.0, 1.0], &[0.0, 0.0, 5.0]]).unwrap();
        let eig = eigen_decompose(&a).unwrap();
        let back = eig.apply(|z| z);
        assert!(norm2(&(back - a.matrix())) < 1e-12);
    }

    #[test]
    fn jordan_block_is_rejected() {
        let a = GeneratorSpec::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(eigen_decompose(&a), Err(Error::Unsupported(_))));
    }
}
