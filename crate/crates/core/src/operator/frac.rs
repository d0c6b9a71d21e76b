//! Fractional powers: spectral evaluation and the Balakrishnan integral.

use nalgebra::DVector;
use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::expm::expm_matrix;
use super::linalg::{eigen_decompose, inverse};
use super::matrix::{identity, GeneratorSpec};
use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, SimpsonOptions};

/// Eigenvalues with real part below `-SPECTRUM_TOL · max(1, |λ|_max)` are
/// outside the closed right half-plane.
const SPECTRUM_TOL: f64 = 1e-10;

/// Absolute tolerance of the Balakrishnan oracle.
pub const BALAKRISHNAN_TOL: f64 = 1e-8;

/// `Γ(−α)` for `α ∈ (0, 1)`, from `Γ(1−α) = −α Γ(−α)`.
pub fn gamma_neg(alpha: f64) -> f64 {
    gamma(1.0 - alpha) / (-alpha)
}

/// `A^α` for `α ∈ [0, 2)` on the principal branch, via eigendecomposition.
pub fn frac_power(a: &GeneratorSpec, alpha: f64) -> Result<DenseMatrix> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 2), got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(identity(a.dim()));
    }
    if alpha == 1.0 {
        return Ok(a.matrix().clone());
    }
    let eig = eigen_decompose(a)?;
    let scale = eig.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(bad) = eig.values.iter().find(|z| z.re < -SPECTRUM_TOL * scale) {
        return Err(Error::Domain(format!(
            "eigenvalue {bad} has negative real part; no principal power"
        )));
    }
    let whole = alpha.floor();
    let frac = alpha - whole;
    let power = |z: Complex64| -> Complex64 {
        if z.norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (z.ln() * frac).exp()
        }
    };
    let remainder = eig.apply(power);
    if whole >= 1.0 {
        // A^α = A^{α−[α]} A^{[α]}; only [α] ∈ {0, 1} occurs here.
        Ok(remainder * a.matrix())
    } else {
        Ok(remainder)
    }
}

/// `A^α x` from `(1/Γ(−α)) ∫₀^∞ λ^{−α−1} (e^{−λA} − I) x dλ`.
///
/// On `[0, 1]` the substitution `λ = u^{1/(1−α)}` removes the endpoint
/// singularity; on `[1, ∞)` the substitution `w = λ^{−α}` maps to `(0, 1]`
/// with unit weight. Each piece is integrated by adaptive Simpson.
pub fn balakrishnan_quadrature(a: &GeneratorSpec, alpha: f64, x: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if x.len() != a.dim() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a {}x{} generator",
            x.len(),
            a.dim(),
            a.dim()
        )));
    }
    inverse(a.matrix())?;
    let m = a.matrix();
    let g = gamma_neg(alpha);
    let opts = SimpsonOptions {
        abs_tol: 0.5 * BALAKRISHNAN_TOL * g.abs(),
        max_depth: 50,
    };
    let ax = m * x;
    let p = 1.0 / (1.0 - alpha);
    let norm_a = super::norms::norm(m, super::NormKind::One);

    // (e^{−λA} − I)x, with a cancellation-free series when ‖λA‖ is small.
    let decay_minus_identity = |lambda: f64| -> Result<DVector<Complex64>> {
        if lambda * norm_a < 0.25 {
            let mut term = x.clone();
            let mut sum = DVector::zeros(x.len());
            for k in 1..40 {
                term = (m * &term) * Complex64::new(-lambda / k as f64, 0.0);
                sum += &term;
                if term.norm() <= 1e-18 * sum.norm().max(1e-300) {
                    break;
                }
            }
            Ok(sum)
        } else {
            Ok(expm_matrix(m, lambda)? * x - x)
        }
    };

    let inner = |u: f64| -> DVector<Complex64> {
        if u == 0.0 {
            return &ax * Complex64::new(-p, 0.0);
        }
        let lambda = u.powf(p);
        let v = decay_minus_identity(lambda).expect("validated generator");
        v * Complex64::new(p * u.powf(-p), 0.0)
    };
    let outer = |w: f64| -> DVector<Complex64> {
        let lambda = w.powf(-1.0 / alpha);
        if w == 0.0 || !lambda.is_finite() {
            return -x.clone();
        }
        let v = decay_minus_identity(lambda).expect("validated generator");
        v * Complex64::new(1.0 / alpha, 0.0)
    };
    let near = adaptive_simpson(inner, 0.0, 1.0, opts)?;
    let far = adaptive_simpson(outer, 0.0, 1.0, opts)?;
    Ok((near + far) * Complex64::new(1.0 / g, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(v: &[f64]) -> DVector<Complex64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn gamma_sign_convention() {
        // Γ(−1/2) = −2√π.
        assert!((gamma_neg(0.5) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_powers() {
        let a = GeneratorSpec::diagonal(&[4.0]).unwrap();
        assert!((frac_power(&a, 0.5).unwrap()[(0, 0)].re - 2.0).abs() < 1e-14);
        let a = GeneratorSpec::diagonal(&[1.0, 9.0]).unwrap();
        let r = frac_power(&a, 0.5).unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-14 && (r[(1, 1)].re - 3.0).abs() < 1e-14);
        let r = frac_power(&a, 1.5).unwrap();
        assert!((r[(1, 1)].re - 27.0).abs() < 1e-12);
        let r = frac_power(&a, 0.0).unwrap();
        assert_eq!(r, identity(2));
    }

    #[test]
    fn rejects_left_half_plane_and_bad_alpha() {
        let a = GeneratorSpec::diagonal(&[-1.0, 2.0]).unwrap();
        assert!(matches!(frac_power(&a, 0.5), Err(Error::Domain(_))));
        let a = GeneratorSpec::diagonal(&[1.0]).unwrap();
        assert!(matches!(frac_power(&a, 2.0), Err(Error::Domain(_))));
        let jordan = GeneratorSpec::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(frac_power(&jordan, 0.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn quadrature_scalar_cases() {
        let a = GeneratorSpec::diagonal(&[1.0]).unwrap();
        let r = balakrishnan_quadrature(&a, 0.5, &vec_of(&[1.0])).unwrap();
        assert!((r[0].re - 1.0).abs() < 1e-8);
        let a = GeneratorSpec::diagonal(&[4.0]).unwrap();
        let r = balakrishnan_quadrature(&a, 0.5, &vec_of(&[1.0])).unwrap();
        assert!((r[0].re - 2.0).abs() < 1e-8);
        let a = GeneratorSpec::diagonal(&[2.0, 5.0]).unwrap();
        let r = balakrishnan_quadrature(&a, 0.3, &vec_of(&[1.0, 1.0])).unwrap();
        assert!((r[0].re - 2f64.powf(0.3)).abs() < 1e-8);
        assert!((r[1].re - 5f64.powf(0.3)).abs() < 1e-8);
    }

    #[test]
    fn laplacian_matches_quadrature() {
        let n = 8;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            rows[i][i] = 2.0;
            if i > 0 {
                rows[i][i - 1] = -1.0;
                rows[i - 1][i] = -1.0;
            }
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = GeneratorSpec::from_rows(&refs).unwrap();
        let p = frac_power(&a, 0.5).unwrap();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let q = balakrishnan_quadrature(&a, 0.5, &vec_of(&e)).unwrap();
            let diff = (p.column(j) - q).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-6, "column {j}: {diff:e}");
        }
    }
}
