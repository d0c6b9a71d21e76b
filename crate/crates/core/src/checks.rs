//! Executable forms of the semigroup inequalities for concrete generators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::norms::norm2;
use crate::operator::{expm, frac_power, gamma_neg, identity, inverse, resolvent, scale};
use crate::operator::{DenseMatrix, GeneratorSpec};
use num_complex::Complex64;

/// Relative slack in `lhs ≤ rhs + SLACK·max(1, rhs)`.
pub const CHECK_SLACK: f64 = 1e-9;
/// Residual scale for identities that should hold to round-off.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    TaylorRemainder,
    ResolventExpansion,
    EulerApprox,
    FracResolvent,
    LocalErrorLeft,
    LocalErrorRight,
    SecondOrderBa,
    SecondOrderAb,
    SmoothingProduct,
    Envelope,
}

impl LemmaId {
    pub fn label(self) -> &'static str {
        match self {
            LemmaId::TaylorRemainder => "taylor_remainder",
            LemmaId::ResolventExpansion => "resolvent_expansion",
            LemmaId::EulerApprox => "euler_approx",
            LemmaId::FracResolvent => "frac_resolvent",
            LemmaId::LocalErrorLeft => "local_error_left",
            LemmaId::LocalErrorRight => "local_error_right",
            LemmaId::SecondOrderBa => "second_order_ba",
            LemmaId::SecondOrderAb => "second_order_ab",
            LemmaId::SmoothingProduct => "smoothing_product",
            LemmaId::Envelope => "envelope",
        }
    }
}

/// Parameters of one inequality instance; absent entries do not apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    pub t: Option<f64>,
    pub n: Option<u64>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub lemma_id: LemmaId,
    pub dim: usize,
    pub params: CheckParams,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl BoundCheckReport {
    pub fn new(lemma_id: LemmaId, dim: usize, params: CheckParams, lhs: f64, rhs: f64) -> Self {
        let satisfied = lhs.is_finite() && lhs <= rhs + CHECK_SLACK * rhs.max(1.0);
        Self {
            lemma_id,
            dim,
            params,
            lhs,
            rhs,
            satisfied,
            margin: rhs - lhs,
        }
    }
}

fn matrix_power(m: &DenseMatrix, k: u32) -> DenseMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `‖(e^{−tA} − Σ_{k≤n} (−tA)^k/k!) A^{−n−1}‖₂ ≤ C_A t^{n+1}/(n+1)!`.
pub fn taylor_remainder_check(a: &GeneratorSpec, n: u64, t: f64) -> Result<BoundCheckReport> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be finite and nonnegative, got {t}")));
    }
    let inv = inverse(a.matrix())?;
    let m = a.matrix();
    let mut partial = identity(a.dim());
    let mut term = identity(a.dim());
    for k in 1..=n {
        term = &term * m * Complex64::new(-t / k as f64, 0.0);
        partial += &term;
    }
    let remainder = expm(a, t)? - partial;
    let lhs = norm2(&(remainder * matrix_power(&inv, n as u32 + 1)));
    let rhs = a.bound_constant() * t.powi(n as i32 + 1) / factorial(n + 1);
    Ok(BoundCheckReport::new(
        LemmaId::TaylorRemainder,
        a.dim(),
        CheckParams { t: Some(t), n: Some(n), ..Default::default() },
        lhs,
        rhs,
    ))
}

/// Residual of `(I+A)^{−1}A^{−n−1} = (Σ_{k≤n}(−A)^k)A^{−n−1} + (−1)^{n+1}(I+A)^{−1}`.
pub fn resolvent_expansion_check(a: &GeneratorSpec, n: u64) -> Result<BoundCheckReport> {
    let inv = inverse(a.matrix())?;
    let r1 = resolvent(a, Complex64::new(1.0, 0.0))?;
    let inv_pow = matrix_power(&inv, n as u32 + 1);
    let neg = scale(a.matrix(), -1.0);
    let mut series = identity(a.dim());
    let mut term = identity(a.dim());
    for _ in 1..=n {
        term = &term * &neg;
        series += &term;
    }
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let first = &r1 * &inv_pow;
    let second = &series * &inv_pow;
    let third = scale(&r1, sign);
    let magnitude = norm2(&first) + norm2(&second) + norm2(&third);
    let lhs = norm2(&(&first - &second - &third));
    Ok(BoundCheckReport::new(
        LemmaId::ResolventExpansion,
        a.dim(),
        CheckParams { n: Some(n), ..Default::default() },
        lhs,
        IDENTITY_TOL * magnitude.max(1.0),
    ))
}

/// `t^{−2}‖((I+tA)^{−1} − e^{−tA})A^{−2}‖₂ ≤ 3C_A/2`.
pub fn euler_approx_check(a: &GeneratorSpec, t: f64) -> Result<BoundCheckReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let inv = inverse(a.matrix())?;
    let euler = inverse(&(identity(a.dim()) + scale(a.matrix(), t)))?;
    let diff = euler - expm(a, t)?;
    let lhs = norm2(&(diff * &inv * &inv)) / (t * t);
    Ok(BoundCheckReport::new(
        LemmaId::EulerApprox,
        a.dim(),
        CheckParams { t: Some(t), ..Default::default() },
        lhs,
        1.5 * a.bound_constant(),
    ))
}

/// `C_{A,α} = C_A(1+C_A) / (α(1−α)|Γ(−α)|)` for `α ∈ (0, 1)`.
pub fn frac_resolvent_constant(c_a: f64, alpha: f64) -> f64 {
    c_a * (1.0 + c_a) / (alpha * (1.0 - alpha) * gamma_neg(alpha).abs())
}

/// `‖A^α(A+μI)^{−1}‖₂ ≤ C_{A,α}/μ^{1−α}`.
pub fn frac_resolvent_check(a: &GeneratorSpec, alpha: f64, mu: f64) -> Result<BoundCheckReport> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let c_a = a.bound_constant();
    let r = resolvent(a, Complex64::new(mu, 0.0))?;
    let lhs = norm2(&(frac_power(a, alpha)? * r));
    let rhs = if alpha == 0.0 {
        c_a / mu
    } else if alpha == 1.0 {
        // A(A+μ)^{−1} = I − μ(A+μ)^{−1}; accretive generators give 1 directly.
        if a.is_accretive() {
            1.0
        } else {
            1.0 + c_a
        }
    } else {
        frac_resolvent_constant(c_a, alpha) / mu.powf(1.0 - alpha)
    };
    Ok(BoundCheckReport::new(
        LemmaId::FracResolvent,
        a.dim(),
        CheckParams { mu: Some(mu), alpha: Some(alpha), ..Default::default() },
        lhs,
        rhs,
    ))
}

/// `n` log-spaced points over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// The measurement grid for moments and derivative constants.
pub const MOMENT_GRID: (f64, f64, usize) = (1e-4, 1e2, 200);

pub fn default_moment_grid() -> Vec<f64> {
    log_grid(MOMENT_GRID.0, MOMENT_GRID.1, MOMENT_GRID.2)
}

/// Result of a moment measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    /// Largest value on the supplied grid.
    pub grid_max: f64,
    /// Golden-section refinement in `ln t` around the best grid point.
    pub refined: f64,
    pub t_star: f64,
}

/// `sup_t t^α‖A^α e^{−tA}‖₂` estimated on `t_grid` and refined locally.
pub fn holomorphic_moment(a: &GeneratorSpec, alpha: f64, t_grid: &[f64]) -> Result<f64> {
    Ok(holomorphic_moment_detail(a, alpha, t_grid)?.refined)
}

pub fn holomorphic_moment_detail(a: &GeneratorSpec, alpha: f64, t_grid: &[f64]) -> Result<MomentEstimate> {
    if t_grid.is_empty() {
        return Err(Error::Domain("empty t grid".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Domain("t grid must be positive and finite".into()));
    }
    let pow = if alpha < 2.0 {
        frac_power(a, alpha)?
    } else {
        let whole = alpha.floor();
        let rest = frac_power(a, alpha - whole)?;
        rest * matrix_power(a.matrix(), whole as u32)
    };
    let f = |t: f64| -> Result<f64> { Ok(t.powf(alpha) * norm2(&(&pow * expm(a, t)?))) };

    let mut grid: Vec<f64> = t_grid.to_vec();
    grid.sort_by(|x, y| x.total_cmp(y));
    let values: Vec<f64> = grid.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let (best, &grid_max) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty grid");

    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (mut refined, mut t_star) = (grid_max, grid[best]);
    if hi > lo {
        let (x, v) = golden_max(|u| f(u.exp()), lo, hi)?;
        if v > refined {
            refined = v;
            t_star = x.exp();
        }
    }
    Ok(MomentEstimate { grid_max, refined, t_star })
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Sector semi-angle of a normal generator.
pub fn sector_check(a: &GeneratorSpec) -> Result<f64> {
    if !a.is_normal() {
        return Err(Error::Unsupported(
            "sector analysis is only implemented for normal matrices".into(),
        ));
    }
    Ok(a.sector_semi_angle().expect("normal generators carry a sector angle"))
}

/// Grids of the standard inequality battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section1Grid {
    pub t_values: Vec<f64>,
    pub mu_values: Vec<f64>,
    pub alphas: Vec<f64>,
    pub taylor_orders: Vec<u64>,
    pub resolvent_orders: Vec<u64>,
}

impl Default for Section1Grid {
    fn default() -> Self {
        Self {
            t_values: vec![0.01, 0.1, 1.0, 5.0, 10.0],
            mu_values: vec![0.01, 0.1, 1.0, 10.0, 100.0],
            alphas: vec![0.25, 0.5, 0.75],
            taylor_orders: vec![0, 1, 2],
            resolvent_orders: vec![0, 1, 2, 3],
        }
    }
}

/// Every inequality of the grid over every matrix, in a deterministic order.
pub fn section1_battery(mats: &[GeneratorSpec], grid: &Section1Grid) -> Result<Vec<BoundCheckReport>> {
    let per_matrix: Vec<Vec<BoundCheckReport>> = mats
        .par_iter()
        .map(|a| -> Result<Vec<BoundCheckReport>> {
            let mut out = Vec::new();
            for &n in &grid.taylor_orders {
                for &t in &grid.t_values {
                    out.push(taylor_remainder_check(a, n, t)?);
                }
            }
            for &n in &grid.resolvent_orders {
                out.push(resolvent_expansion_check(a, n)?);
            }
            for &t in &grid.t_values {
                out.push(euler_approx_check(a, t)?);
            }
            for &alpha in &grid.alphas {
                for &mu in &grid.mu_values {
                    out.push(frac_resolvent_check(a, alpha, mu)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_matrix.into_iter().flatten().collect())
}
