//! Finite realization of the evolution pair: a nilpotent shift for the
//! translation semigroup and a diagonal multiplication operator.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::potential::ScalarPotential;
use super::riemann::{propagator_exact, riemann_error, trotter_propagator, SimplexPoint};
use crate::error::{Error, Result};

/// Largest grid the bridge builds.
pub const MAX_BRIDGE_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub m: usize,
    pub tau: f64,
    pub n: u64,
    /// Number of step sizes `τ' = j·n·h ≤ τ` swept.
    pub tau_points: usize,
    /// `max_{τ'} ‖P_trotter(τ') − P_exact(τ')‖_∞` from the matrices.
    pub matrix_error: f64,
    /// `max |U(t,s) − V_n(t,s)|` over the same grid-aligned `(t, s)`.
    pub scalar_error: f64,
    /// `max R_n(t, s)` over the same points.
    pub riemann_max: f64,
}

fn aligned_multiple(x: f64, m: usize, what: &str) -> Result<usize> {
    let units = x * m as f64;
    let r = units.round();
    if r < 1.0 || (units - r).abs() > 1e-9 * units.max(1.0) {
        return Err(Error::Alignment(format!(
            "{what} = {x} is not a positive multiple of h = 1/{m}"
        )));
    }
    Ok(r as usize)
}

/// Compare the matrix-level Trotter error with its scalar reduction.
///
/// Nodes are `x_i = (i+1)h`. One Trotter step of size `σ = rh` is
/// `S_r·diag(e^{−σ q(x_i)})`; the exact step is `S_r·diag(exp(−∫_{x_i}^{x_i+σ} q))`,
/// whose `n`-th power is the exact propagator by the composition law.
pub fn discretized_bridge(q: &ScalarPotential, m: usize, tau: f64, n: u64) -> Result<BridgeReport> {
    if m == 0 || m > MAX_BRIDGE_GRID {
        return Err(Error::Domain(format!("grid size must lie in 1..={MAX_BRIDGE_GRID}, got {m}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if n as usize >= m {
        return Err(Error::Alignment(format!("n = {n} leaves no aligned step on a grid of {m}")));
    }
    let h = 1.0 / m as f64;
    let tau_units = aligned_multiple(tau, m, "tau")?;
    let r = aligned_multiple(tau / n as f64, m, "tau/n")?;
    if r * n as usize != tau_units {
        return Err(Error::Alignment(format!("tau/n does not divide tau on the grid of {m}")));
    }
    let x = |i: usize| (i + 1) as f64 * h;
    let q_nodes: Vec<f64> = (0..m).map(|i| q.eval(x(i))).collect();

    let results = (1..=r)
        .into_par_iter()
        .map(|r_step| -> Result<(f64, f64, f64)> {
            let sigma = r_step as f64 * h;
            let shift_step = |diag: &[f64]| {
                let mut s = DMatrix::<f64>::zeros(m, m);
                for i in r_step..m {
                    s[(i, i - r_step)] = diag[i - r_step];
                }
                s
            };
            let trotter_diag: Vec<f64> = q_nodes.iter().map(|&v| (-(sigma * v)).exp()).collect();
            let exact_diag: Vec<f64> = (0..m)
                .map(|i| Ok((-q.integral_over(x(i), sigma)?).exp()))
                .collect::<Result<_>>()?;
            let t_step = shift_step(&trotter_diag);
            let e_step = shift_step(&exact_diag);
            let mut t_pow = t_step.clone();
            let mut e_pow = e_step.clone();
            for _ in 1..n {
                t_pow = &t_step * &t_pow;
                e_pow = &e_step * &e_pow;
            }
            let matrix_error = (t_pow - e_pow)
                .row_iter()
                .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0, f64::max);

            let span = r_step * n as usize;
            let mut scalar_error = 0.0f64;
            let mut riemann_max = 0.0f64;
            for i in span..m {
                let p = SimplexPoint::new(x(i - span), x(i))?;
                let diff = (propagator_exact(q, p)? - trotter_propagator(q, p, n)?).abs();
                scalar_error = scalar_error.max(diff);
                riemann_max = riemann_max.max(riemann_error(q, p, n)?);
            }
            Ok((matrix_error, scalar_error, riemann_max))
        })
        .collect::<Result<Vec<_>>>()?;

    let fold = |f: fn(&(f64, f64, f64)) -> f64| results.iter().map(f).fold(0.0, f64::max);
    Ok(BridgeReport {
        m,
        tau,
        n,
        tau_points: r,
        matrix_error: fold(|x| x.0),
        scalar_error: fold(|x| x.1),
        riemann_max: fold(|x| x.2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_potential_commutes_exactly() {
        let q = ScalarPotential::constant(0.7).unwrap();
        let r = discretized_bridge(&q, 64, 0.5, 4).unwrap();
        assert_eq!(r.matrix_error, 0.0);
        assert_eq!(r.scalar_error, 0.0);
    }

    #[test]
    fn linear_potential_agrees() {
        let q = ScalarPotential::linear(0.0, 1.0).unwrap();
        let r = discretized_bridge(&q, 64, 0.5, 4).unwrap();
        assert!((r.matrix_error - r.scalar_error).abs() <= 2.0 / 64.0);
        assert!(r.matrix_error > 0.0);
    }

    #[test]
    fn alignment_errors() {
        let q = ScalarPotential::linear(0.0, 1.0).unwrap();
        assert!(matches!(discretized_bridge(&q, 64, 1.0, 64), Err(Error::Alignment(_))));
        assert!(matches!(discretized_bridge(&q, 64, 0.3, 2), Err(Error::Alignment(_))));
        assert!(matches!(discretized_bridge(&q, 64, 0.5, 3), Err(Error::Alignment(_))));
    }
}
