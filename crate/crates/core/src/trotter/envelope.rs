use serde::{Deserialize, Serialize};

use super::constants::TheoremConstants;
use super::product::ErrorCurve;
use crate::checks::{BoundCheckReport, CheckParams, LemmaId};
use crate::error::{Error, Result};

/// Rate envelope `e^{ηt}(M₁ + M₂t^{1−α}) ln n/n^{1−α}` for `α > 0`, or
/// `e^{ηt}(M₁ + M̃₂t) 2(ln n)²/n` for `α = 0`.
pub fn envelope_value(k: &TheoremConstants, t: f64, n: u64) -> f64 {
    let nf = n as f64;
    let growth = (k.eta * t).exp();
    match k.m2 {
        Some(m2) if k.alpha > 0.0 => {
            growth * (k.m1 + m2 * t.powf(1.0 - k.alpha)) * nf.ln() / nf.powf(1.0 - k.alpha)
        }
        _ => growth * (k.m1 + k.m2_tilde * t) * 2.0 * nf.ln().powi(2) / nf,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub points: Vec<BoundCheckReport>,
    pub satisfied: bool,
    pub min_margin: f64,
    pub eta: f64,
}

/// Compare every curve point against the envelope.
pub fn envelope_check(curve: &ErrorCurve, k: &TheoremConstants, t: f64, dim: usize) -> Result<EnvelopeReport> {
    if let Some(p) = curve.points.iter().find(|p| p.n <= 2) {
        return Err(Error::Precondition(format!("envelope needs n > 2, got {}", p.n)));
    }
    let points: Vec<BoundCheckReport> = curve
        .points
        .iter()
        .map(|p| {
            BoundCheckReport::new(
                LemmaId::Envelope,
                dim,
                CheckParams { t: Some(t), n: Some(p.n), alpha: Some(k.alpha), ..Default::default() },
                p.error,
                envelope_value(k, t, p.n),
            )
        })
        .collect();
    let satisfied = points.iter().all(|r| r.satisfied);
    let min_margin = points.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(EnvelopeReport { points, satisfied, min_margin, eta: k.eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::NormKind;
    use crate::trotter::{theorem_constants, CurvePoint, MeasuredConstants, Ordering};

    fn constants(alpha: f64) -> TheoremConstants {
        let m = MeasuredConstants { c_a: 1.0, c_b: 1.0, c_h: 1.0, c_a_prime: 0.4, c_h_prime: 0.4, b_norm: 0.5 };
        theorem_constants(m, 0.5, 0.5, 0.3, alpha, 0.25).unwrap()
    }

    #[test]
    fn falsified_by_curve_above_envelope() {
        for alpha in [0.0, 0.5] {
            let k = constants(alpha);
            let points = [4u64, 8, 16]
                .iter()
                .map(|&n| CurvePoint { n, error: envelope_value(&k, 1.0, n) * 1.01 })
                .collect();
            let c = ErrorCurve::new(1.0, Ordering::Ba, NormKind::Two, points).unwrap();
            let r = envelope_check(&c, &k, 1.0, 2).unwrap();
            assert!(!r.satisfied && r.min_margin < 0.0);
        }
    }

    #[test]
    fn zero_curve_passes() {
        let k = constants(0.5);
        let points = [4u64, 8].iter().map(|&n| CurvePoint { n, error: 0.0 }).collect();
        let c = ErrorCurve::new(1.0, Ordering::Sym, NormKind::Two, points).unwrap();
        assert!(envelope_check(&c, &k, 1.0, 2).unwrap().satisfied);
    }
}
