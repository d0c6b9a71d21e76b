//! Explicit gliding-hump potentials with prescribed slow Riemann-sum decay.

use super::potential::{ScalarPotential, WitnessLevel};
use super::riemann::{riemann_error, SimplexPoint};
use crate::error::{Error, Result};

/// Height multiplier: a tent of height `h` has mean `h/2`, so `h = 4δ` leaves
/// a factor-two margin over `δ` at its own frequency.
pub const HEIGHT_FACTOR: f64 = 4.0;

/// Build and validate `q = Σ_k h_k·tent(n_k t)` with `h_k = min(1, 4δ_k)`.
///
/// Level-`k` tents vanish on the grid `j/n_k`, which contains every coarser
/// grid because the `n_k` are dyadic and increasing. Validation checks that
/// `q ∈ [0, 1]` and that `R_{n_k}(1, 0⁺) ≥ δ_k` at every level.
pub fn slow_witness(levels: &[(u64, f64)]) -> Result<ScalarPotential> {
    for (i, &(n, delta)) in levels.iter().enumerate() {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidInput(format!("level {i}: n = {n} is not a dyadic integer ≥ 2")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidInput(format!("level {i}: delta = {delta} is not in (0, 1]")));
        }
        if i > 0 {
            let (prev_n, prev_delta) = levels[i - 1];
            if n <= prev_n {
                return Err(Error::InvalidInput(format!("level {i}: n must increase strictly")));
            }
            if delta > prev_delta {
                return Err(Error::InvalidInput(format!("level {i}: delta must not increase")));
            }
        }
    }
    let built: Vec<WitnessLevel> = levels
        .iter()
        .map(|&(n, delta)| WitnessLevel { n, delta, height: (HEIGHT_FACTOR * delta).min(1.0) })
        .collect();
    let q = ScalarPotential::witness(built.clone());

    if q.sup_norm() > 1.0 + 1e-12 {
        let (i, l) = built.iter().enumerate().last().expect("non-empty when q > 0");
        return Err(Error::Construction {
            level: i,
            n: l.n,
            reason: format!("superposed heights reach {} > 1", q.sup_norm()),
        });
    }
    for (i, l) in built.iter().enumerate() {
        let r = riemann_error(&q, SimplexPoint::corner(1.0), l.n)?;
        if r < l.delta {
            return Err(Error::Construction {
                level: i,
                n: l.n,
                reason: format!("R_n(1, 0+) = {r:.6e} is below delta = {:.6e}", l.delta),
            });
        }
    }
    Ok(q)
}

/// `R_{n_k}(1, 0⁺)` at every level of a witness built from `levels`.
pub fn witness_errors(q: &ScalarPotential, ns: &[u64]) -> Result<Vec<f64>> {
    ns.iter().map(|&n| riemann_error(q, SimplexPoint::corner(1.0), n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level() {
        let q = slow_witness(&[(8, 0.1)]).unwrap();
        assert!((q.antiderivative(1.0).unwrap() - 0.2).abs() < 1e-15);
        let r = witness_errors(&q, &[8]).unwrap()[0];
        assert!((r - 0.2).abs() < 1e-15);
    }

    #[test]
    fn empty_is_zero() {
        let q = slow_witness(&[]).unwrap();
        assert_eq!(q.eval(0.3), 0.0);
        assert_eq!(q.sup_norm(), 0.0);
    }

    #[test]
    fn two_levels_validate() {
        let q = slow_witness(&[(8, 0.2), (64, 0.05)]).unwrap();
        let r = witness_errors(&q, &[8, 64]).unwrap();
        assert!(r[0] >= 0.2 && r[1] >= 0.05);
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(slow_witness(&[(6, 0.1)]).is_err());
        assert!(slow_witness(&[(8, 0.1), (8, 0.1)]).is_err());
        assert!(slow_witness(&[(8, 0.1), (16, 0.2)]).is_err());
    }
}
