//! The Riemann-sum error functional and the exact and Trotter propagators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cantor::{cantor_window, MAX_WINDOW_LEVEL};
use super::potential::{PotentialKind, ScalarPotential};
use crate::error::{Error, Result};

/// Smallest admissible grid density for the supremum search.
pub const MIN_GRID_DENSITY: usize = 64;

/// A point `0 < s ≤ t ≤ 1` of the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    s: f64,
    t: f64,
}

impl SimplexPoint {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !(0.0 < s && s <= t && t <= 1.0) {
            return Err(Error::Domain(format!("(s, t) = ({s}, {t}) is not in 0 < s ≤ t ≤ 1")));
        }
        Ok(Self { s, t })
    }

    /// The closure point `s = 0`, reachable as a limit for continuous `q`.
    pub(crate) fn corner(t: f64) -> Self {
        Self { s: 0.0, t }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// `τ_n Σ_{k<n} q(s + kτ_n)` with `τ_n = (t − s)/n`.
pub fn left_sum(q: &ScalarPotential, s: f64, t: f64, n: u64) -> f64 {
    if let PotentialKind::Constant { value } = q.kind() {
        return value * (t - s);
    }
    let tau = (t - s) / n as f64;
    let sum: f64 = (0..n).map(|k| q.eval(s + k as f64 * tau)).sum();
    tau * sum
}

fn integral(q: &ScalarPotential, s: f64, t: f64) -> Result<f64> {
    q.integral_over(s, t - s)
}

/// `U(t, s) = exp(−∫_s^t q)`.
pub fn propagator_exact(q: &ScalarPotential, p: SimplexPoint) -> Result<f64> {
    Ok((-integral(q, p.s, p.t)?).exp())
}

/// `V_n(t, s) = exp(−τ_n Σ_{k<n} q(s + kτ_n))`.
pub fn trotter_propagator(q: &ScalarPotential, p: SimplexPoint, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    Ok((-left_sum(q, p.s, p.t, n)).exp())
}

/// `R_n(t, s; q) = |∫_s^t q − τ_n Σ_{k<n} q(s + kτ_n)|`.
pub fn riemann_error(q: &ScalarPotential, p: SimplexPoint, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    Ok((integral(q, p.s, p.t)? - left_sum(q, p.s, p.t, n)).abs())
}

/// Where the supremum estimate was attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupSource {
    Grid,
    /// The continuous-extension corner `(s, t) = (0⁺, 1)`.
    Corner,
    /// A vanishing-sum window point of the Cantor construction.
    CantorWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub s: f64,
    pub t: f64,
    pub source: SupSource,
    pub grid_density: usize,
}

/// `sup_{(t,s)} R_n(t, s; q)`; see [`sup_riemann_error_detail`].
pub fn sup_riemann_error(q: &ScalarPotential, n: u64, grid_density: usize) -> Result<f64> {
    Ok(sup_riemann_error_detail(q, n, grid_density)?.value)
}

/// Maximum of `R_n` over the grid `s = i/g ≤ t = j/g` plus kind-specific
/// candidates. Every value is attained (or is a limit of attained values),
/// so the result is a lower bound for the supremum; nested grids can only
/// raise it.
pub fn sup_riemann_error_detail(q: &ScalarPotential, n: u64, grid_density: usize) -> Result<SupEstimate> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if grid_density < MIN_GRID_DENSITY {
        return Err(Error::Domain(format!(
            "grid density must be at least {MIN_GRID_DENSITY}, got {grid_density}"
        )));
    }
    let g = grid_density;
    let mut candidates: Vec<(f64, f64, SupSource)> = Vec::new();
    if q.is_continuous() {
        candidates.push((0.0, 1.0, SupSource::Corner));
    }
    if let PotentialKind::Cantor(spec) = q.kind() {
        if n.is_power_of_two() {
            let m = n.trailing_zeros();
            if (1..=MAX_WINDOW_LEVEL.min(spec.level_cap)).contains(&m) {
                let (eps, _) = cantor_window(m)?;
                candidates.push((eps / 2.0, 1.0 - eps / 2.0, SupSource::CantorWindow));
            }
        }
    }

    let mut xs: Vec<f64> = (0..=g).map(|i| i as f64 / g as f64).collect();
    for &(s, t, _) in &candidates {
        xs.push(s);
        xs.push(t);
    }
    let table = q.antiderivative_table(&xs)?;
    let at = |i: usize| (xs[i], table[i]);

    let best_grid = (1..=g)
        .into_par_iter()
        .map(|i| {
            let (s, fs) = at(i);
            let mut best = (0.0f64, s, s);
            for j in i..=g {
                let (t, ft) = at(j);
                let r = (q.segment_from_table(s, t, fs, ft) - left_sum(q, s, t, n)).abs();
                if r > best.0 {
                    best = (r, s, t);
                }
            }
            best
        })
        .reduce(
            || (0.0, 1.0, 1.0),
            |a, b| {
                // Ties resolve to the smaller (s, t) so the reduction is order-free.
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    let mut best = SupEstimate { value: best_grid.0, s: best_grid.1, t: best_grid.2, source: SupSource::Grid, grid_density: g };
    for (c, &(s, t, source)) in candidates.iter().enumerate() {
        let fs = table[g + 1 + 2 * c];
        let ft = table[g + 2 + 2 * c];
        let r = (q.segment_from_table(s, t, fs, ft) - left_sum(q, s, t, n)).abs();
        if r > best.value {
            best = SupEstimate { value: r, s, t, source, grid_density: g };
        }
    }
    Ok(best)
}

/// `(e^{−‖q‖∞} R_n(q), R_n(q))`, bracketing the operator-norm Trotter error.
pub fn operator_error_sandwich(q: &ScalarPotential, n: u64, grid_density: usize) -> Result<(f64, f64)> {
    let r = sup_riemann_error(q, n, grid_density)?;
    Ok(((-q.sup_norm()).exp() * r, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::CantorSpec;

    #[test]
    fn propagator_examples() {
        let zero = ScalarPotential::constant(0.0).unwrap();
        let p = SimplexPoint::new(0.2, 0.9).unwrap();
        assert_eq!(propagator_exact(&zero, p).unwrap(), 1.0);
        let c = ScalarPotential::constant(2.0).unwrap();
        assert_eq!(propagator_exact(&c, p).unwrap(), (-2.0 * (0.9 - 0.2f64)).exp());
        for n in 1..20 {
            assert_eq!(trotter_propagator(&c, p, n).unwrap(), propagator_exact(&c, p).unwrap());
            assert_eq!(riemann_error(&c, p, n).unwrap(), 0.0);
        }
        let y = ScalarPotential::linear(0.0, 1.0).unwrap();
        let corner = SimplexPoint::corner(1.0);
        assert!((propagator_exact(&y, corner).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((trotter_propagator(&y, corner, 2).unwrap() - (-0.25f64).exp()).abs() < 1e-15);
        let p = SimplexPoint::new(0.3, 0.8).unwrap();
        assert_eq!(trotter_propagator(&y, p, 1).unwrap(), (-(0.5 * 0.3f64)).exp());
    }

    #[test]
    fn linear_error_closed_form() {
        let y = ScalarPotential::linear(0.0, 1.0).unwrap();
        for n in [1u64, 2, 5, 64] {
            let r = riemann_error(&y, SimplexPoint::corner(1.0), n).unwrap();
            assert!((r - 0.5 / n as f64).abs() < 1e-15);
            let sup = sup_riemann_error_detail(&y, n, 64).unwrap();
            assert!((sup.value - 0.5 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_sup_is_zero() {
        let c = ScalarPotential::constant(3.0).unwrap();
        assert_eq!(sup_riemann_error(&c, 7, 64).unwrap(), 0.0);
        assert_eq!(operator_error_sandwich(&c, 7, 64).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn cantor_window_error_is_integral() {
        let q = ScalarPotential::cantor(CantorSpec::new(16).unwrap());
        let (eps, _) = cantor_window(3).unwrap();
        let p = SimplexPoint::new(eps / 2.0, 1.0 - eps / 2.0).unwrap();
        assert_eq!(left_sum(&q, p.s(), p.t(), 8), 0.0);
        let integral = q.integral_over(p.s(), p.t() - p.s()).unwrap();
        assert_eq!(riemann_error(&q, p, 8).unwrap(), integral);
    }

    #[test]
    fn rejects_coarse_grid_and_bad_points() {
        let y = ScalarPotential::linear(0.0, 1.0).unwrap();
        assert!(sup_riemann_error(&y, 4, 32).is_err());
        assert!(SimplexPoint::new(0.0, 0.5).is_err());
        assert!(SimplexPoint::new(0.6, 0.5).is_err());
    }
}
