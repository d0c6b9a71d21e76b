use super::matrix::{validate_finite, DenseMatrix, NormKind};
use crate::error::Result;

/// Induced operator norm for `p ∈ {1, 2, ∞}`.
pub fn op_norm(m: &DenseMatrix, kind: NormKind) -> Result<f64> {
    validate_finite(m)?;
    Ok(norm(m, kind))
}

pub(crate) fn norm(m: &DenseMatrix, kind: NormKind) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match kind {
        NormKind::One => m
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Inf => m
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Two => m
            .clone()
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max),
    }
}

/// Spectral norm shorthand used throughout the checks.
pub(crate) fn norm2(m: &DenseMatrix) -> f64 {
    norm(m, NormKind::Two)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use super::*;
    use nalgebra::DMatrix;

    fn real(rows: &[&[f64]]) -> DenseMatrix {
        DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn identity_has_unit_norm() {
        for n in [1, 3, 7] {
            let id = DenseMatrix::identity(n, n);
            for kind in [NormKind::One, NormKind::Two, NormKind::Inf] {
                assert!((op_norm(&id, kind).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn nilpotent_spectral_norm() {
        let m = real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((op_norm(&m, NormKind::Two).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn column_and_row_sums() {
        let m = real(&[&[1.0, -1.0], &[2.0, 0.0]]);
        assert_eq!(op_norm(&m, NormKind::One).unwrap(), 3.0);
        assert_eq!(op_norm(&m, NormKind::Inf).unwrap(), 2.0);
    }

    #[test]
    fn nan_rejected() {
        let mut m = real(&[&[1.0]]);
        m[(0, 0)] = Complex64::new(f64::NAN, 0.0);
        assert!(op_norm(&m, NormKind::One).is_err());
    }
}
