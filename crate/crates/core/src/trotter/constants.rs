use serde::{Deserialize, Serialize};

use crate::checks::{holomorphic_moment, log_grid, MOMENT_GRID};
use crate::error::{Error, Result};
use crate::operator::norms::norm2;
use crate::operator::{frac_power, inverse, GeneratorSpec};

/// Largest relative bound accepted when choosing the shift `η`.
pub const TARGET_RELATIVE_BOUND: f64 = 0.5;
/// Exponent range searched for `η = 2^k`.
pub const ETA_EXPONENTS: (i32, i32) = (-16, 20);

/// Relative bounds of `B` with respect to `Ã = A + ηI`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeBound {
    /// `‖BÃ^{−1}‖₂`
    pub a_prime: f64,
    /// `‖Ã^{−1}B‖₂`, the bound for the adjoint pair.
    pub a_prime_adjoint: f64,
    /// `‖BÃ^{−α}‖₂`
    pub d: f64,
}

impl RelativeBound {
    /// The larger of the two relative bounds; both lemmas need it below one.
    pub fn worst(&self) -> f64 {
        self.a_prime.max(self.a_prime_adjoint)
    }
}

pub fn relative_bound_estimate(b: &GeneratorSpec, a: &GeneratorSpec, alpha: f64, eta: f64) -> Result<RelativeBound> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    if a.dim() != b.dim() {
        return Err(Error::Dimension("A and B differ in dimension".into()));
    }
    let shifted = a.shifted(eta)?;
    let inv = inverse(shifted.matrix())?;
    let inv_alpha = inverse(&frac_power(&shifted, alpha)?)?;
    Ok(RelativeBound {
        a_prime: norm2(&(b.matrix() * &inv)),
        a_prime_adjoint: norm2(&(&inv * b.matrix())),
        d: norm2(&(b.matrix() * inv_alpha)),
    })
}

/// Smallest `η = 2^k` with both relative bounds at most [`TARGET_RELATIVE_BOUND`].
pub fn select_eta(a: &GeneratorSpec, b: &GeneratorSpec) -> Result<f64> {
    for k in ETA_EXPONENTS.0..=ETA_EXPONENTS.1 {
        let eta = 2f64.powi(k);
        match relative_bound_estimate(b, a, 0.0, eta) {
            Ok(r) if r.worst() <= TARGET_RELATIVE_BOUND => return Ok(eta),
            Ok(_) | Err(Error::Singular { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precondition(format!(
        "no shift up to 2^{} brings the relative bound below {TARGET_RELATIVE_BOUND}",
        ETA_EXPONENTS.1
    )))
}

/// `Σ_{j≥1} j^{−s}` for `s > 1`, with an Euler–Maclaurin tail.
pub fn zeta_sum(s: f64) -> f64 {
    assert!(s > 1.0, "series diverges for s ≤ 1");
    let n = 1000usize;
    let head: f64 = (1..n).map(|j| (j as f64).powf(-s)).sum();
    let nf = n as f64;
    // ∫_N^∞ x^{−s} + f(N)/2 − f'(N)/12 + f'''(N)/720.
    head + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0
}

/// Measured semigroup constants of the shifted pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredConstants {
    pub c_a: f64,
    pub c_b: f64,
    pub c_h: f64,
    /// `sup_t t‖Ãe^{−tÃ}‖`
    pub c_a_prime: f64,
    /// `sup_t t‖H̃e^{−tH̃}‖`
    pub c_h_prime: f64,
    pub b_norm: f64,
}

/// The constant ledger of the convergence-rate proof.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremConstants {
    pub alpha: f64,
    pub eta: f64,
    pub c_a: f64,
    pub c_b: f64,
    pub c_h: f64,
    pub c_a_prime: f64,
    pub c_h_prime: f64,
    pub a_prime: f64,
    pub d: f64,
    /// `sup_t t^{1+α}‖Ã^{1+α}e^{−tÃ}‖`, the moment the smoothing lemma uses.
    pub m_alpha: f64,
    pub b_norm: f64,
    pub zeta: Option<f64>,
    pub l1: f64,
    pub l2: f64,
    pub l3: Option<f64>,
    pub l3_tilde: f64,
    pub m1: f64,
    pub m2: Option<f64>,
    pub m2_tilde: f64,
    /// Log grid `(lo, hi, points)` the derivative constants were measured on.
    pub moment_grid: (f64, f64, usize),
}

/// Fill the ledger by direct substitution.
pub fn theorem_constants(
    measured: MeasuredConstants,
    a_prime: f64,
    d: f64,
    m_alpha: f64,
    alpha: f64,
    eta: f64,
) -> Result<TheoremConstants> {
    if !(a_prime < 1.0) {
        return Err(Error::Precondition(format!(
            "relative bound a' = {a_prime} is not below 1; shift eta too small"
        )));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let MeasuredConstants { c_a, c_b, c_h, c_a_prime, c_h_prime, b_norm } = measured;
    let ap = a_prime;
    let l1 = c_b * ap + c_a + c_h * (1.0 + ap);
    let l2 = ap * c_a * c_b
        + 1.5 * c_a
        + 1.5 * c_b * ap * ap
        + 1.5 * c_h * (1.0 + ap).powi(2)
        + 1.0
        + ap * ap
        + (1.0 + ap).powi(2);
    let inv_gap = 1.0 / (1.0 - ap);
    let zeta = (alpha > 0.0).then(|| zeta_sum(1.0 + alpha));
    let l3 = zeta.map(|z| d * m_alpha * z);
    let l3_tilde = b_norm * c_a_prime;
    let m1 = 4.0 * l1 * (c_a_prime + c_h_prime * inv_gap) + 4.0 * l2 * c_h_prime * c_a_prime * inv_gap;
    let m2 = l3.map(|l3| 2.0 * l3 * l1 + 2.0 * l3 * l2 * c_h_prime * inv_gap);
    let m2_tilde = 2.0 * l3_tilde * l1 + 2.0 * l3_tilde * l2 * c_h_prime * inv_gap;
    Ok(TheoremConstants {
        alpha,
        eta,
        c_a,
        c_b,
        c_h,
        c_a_prime,
        c_h_prime,
        a_prime,
        d,
        m_alpha,
        b_norm,
        zeta,
        l1,
        l2,
        l3,
        l3_tilde,
        m1,
        m2,
        m2_tilde,
        moment_grid: MOMENT_GRID,
    })
}

/// Choose `η`, shift, measure every constant and fill the ledger.
pub fn measure_constants(a: &GeneratorSpec, b: &GeneratorSpec, alpha: f64) -> Result<TheoremConstants> {
    let eta = select_eta(a, b)?;
    let rel = relative_bound_estimate(b, a, alpha, eta)?;
    let a_t = a.shifted(eta)?;
    let h_t = a_t.sum(b)?;
    let grid = log_grid(MOMENT_GRID.0, MOMENT_GRID.1, MOMENT_GRID.2);
    let c_a_prime = holomorphic_moment(&a_t, 1.0, &grid)?;
    let c_h_prime = holomorphic_moment(&h_t, 1.0, &grid)?;
    let m_alpha = if alpha > 0.0 {
        holomorphic_moment(&a_t, 1.0 + alpha, &grid)?
    } else {
        c_a_prime
    };
    let measured = MeasuredConstants {
        c_a: a_t.bound_constant(),
        c_b: b.bound_constant(),
        c_h: h_t.bound_constant(),
        c_a_prime,
        c_h_prime,
        b_norm: norm2(b.matrix()),
    };
    theorem_constants(measured, rel.worst(), rel.d, m_alpha, alpha, eta)
}
