//! Finite-sample Landau classification of error sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trotter::ErrorCurve;

/// Verdict of [`classify_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "O")]
    BigO,
    #[serde(rename = "o")]
    LittleO,
    #[serde(rename = "Theta")]
    Theta,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::BigO => "O",
            Verdict::LittleO => "o",
            Verdict::Theta => "Theta",
            Verdict::Omega => "omega",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Thresholds of the classifier, echoed in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauThresholds {
    /// `O`: max ratio over the top half ≤ this × max over the bottom half.
    pub big_o_factor: f64,
    /// `Theta`: min ratio over the top half ≥ this × min over the bottom half.
    pub theta_factor: f64,
    /// `omega`: ratio growth per doubling of `n`.
    pub omega_growth: f64,
    /// `o`: last ratio below this × first ratio.
    pub little_o_factor: f64,
    pub min_points: usize,
}

pub const LANDAU: LandauThresholds = LandauThresholds {
    big_o_factor: 1.1,
    theta_factor: 0.9,
    omega_growth: 1.1,
    little_o_factor: 0.1,
    min_points: 6,
};

/// Reference model `f(n) = (ln n)^logpow / n^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateModel {
    pub exponent: f64,
    pub logpow: u32,
}

impl RateModel {
    pub fn power(exponent: f64) -> Self {
        Self { exponent, logpow: 0 }
    }

    pub fn eval(&self, n: u64) -> f64 {
        let n = n as f64;
        n.ln().powi(self.logpow as i32) * n.powf(-self.exponent)
    }

    /// Parse `n^-c`, `1/n`, `1/sqrt(n)`, `1/n^c`, optionally prefixed by
    /// `ln(n)*` or `ln(n)^k*`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("cannot parse rate model {text:?}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (log_part, pow_part) = match s.split_once('*') {
            Some((l, p)) => (Some(l), p),
            None => (None, s.as_str()),
        };
        let logpow = match log_part {
            None => 0,
            Some("ln(n)") => 1,
            Some(l) => l
                .strip_prefix("ln(n)^")
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(bad)?,
        };
        let exponent = match pow_part {
            "1/n" => 1.0,
            "1/sqrt(n)" => 0.5,
            "1" => 0.0,
            p => {
                let c = p.strip_prefix("n^-").or_else(|| p.strip_prefix("1/n^")).ok_or_else(bad)?;
                let c = c.trim_start_matches('(').trim_end_matches(')');
                c.parse::<f64>().map_err(|_| bad())?
            }
        };
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(bad());
        }
        Ok(Self { exponent, logpow })
    }
}

impl std::fmt::Display for RateModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.logpow {
            0 => write!(f, "n^-{}", self.exponent),
            1 => write!(f, "ln(n)*n^-{}", self.exponent),
            k => write!(f, "ln(n)^{k}*n^-{}", self.exponent),
        }
    }
}

/// Classify an error curve against `reference`.
pub fn classify_rate(curve: &ErrorCurve, reference: &RateModel) -> Result<Verdict> {
    classify_sequence(&curve.ns(), &curve.errors(), reference)
}

/// Classify `errors[k]` at `ns[k]` from the ratios `r_k = error/f(n_k)`.
///
/// Precedence: omega, o, Theta, O, inconclusive.
pub fn classify_sequence(ns: &[u64], errors: &[f64], reference: &RateModel) -> Result<Verdict> {
    let th = LANDAU;
    if ns.len() != errors.len() {
        return Err(Error::Dimension("ns and errors differ in length".into()));
    }
    if ns.len() < th.min_points {
        return Err(Error::Precondition(format!(
            "classification needs at least {} points, got {}",
            th.min_points,
            ns.len()
        )));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) || ns[0] < 2 {
        return Err(Error::InvalidInput("n must be increasing and at least 2".into()));
    }
    if errors.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::InvalidInput("errors must be finite and nonnegative".into()));
    }
    let r: Vec<f64> = ns.iter().zip(errors).map(|(&n, &e)| e / reference.eval(n)).collect();
    if r.iter().all(|&x| x == 0.0) {
        return Ok(Verdict::LittleO);
    }

    let omega = ns.windows(2).zip(r.windows(2)).all(|(n, x)| {
        let doublings = (n[1] as f64 / n[0] as f64).log2();
        x[1] > x[0] && x[1] >= x[0] * th.omega_growth.powf(doublings)
    });
    if omega {
        return Ok(Verdict::Omega);
    }
    let (first, last) = (r[0], r[r.len() - 1]);
    if last < th.little_o_factor * first {
        return Ok(Verdict::LittleO);
    }
    let half = r.len() / 2;
    let (bottom, top) = (&r[..half], &r[r.len() - half..]);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    if max(top) <= th.big_o_factor * max(bottom) {
        if min(top) >= th.theta_factor * min(bottom) {
            return Ok(Verdict::Theta);
        }
        return Ok(Verdict::BigO);
    }
    Ok(Verdict::Inconclusive)
}
