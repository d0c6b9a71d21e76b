use serde::{Deserialize, Serialize};

use super::product::ErrorCurve;
use crate::error::{Error, Result};

/// Curve points at or below this are treated as round-off and excluded.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;
/// Minimum usable points for a fit.
pub const MIN_FIT_POINTS: usize = 4;

/// `error ≈ constant · n^{−gamma} · (ln n)^{logpow}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub gamma: f64,
    pub logpow: u32,
    pub constant: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Least-squares fit of `ln e − k ln ln n` against `ln n` with `k` fixed.
pub fn fit_rate(curve: &ErrorCurve, logpow: u32) -> Result<RateFit> {
    if logpow > 2 {
        return Err(Error::Domain(format!("logpow must be 0, 1 or 2, got {logpow}")));
    }
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.n > 2 && p.error > ROUNDOFF_FLOOR)
        .map(|p| {
            let n = p.n as f64;
            (n.ln(), p.error.ln() - logpow as f64 * n.ln().ln())
        })
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::DegenerateFit(format!(
            "{} points above the round-off floor {ROUNDOFF_FLOOR:e}, need {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(RateFit {
        gamma: -slope,
        logpow,
        constant: intercept.exp(),
        r_squared,
        points_used: pts.len(),
    })
}
