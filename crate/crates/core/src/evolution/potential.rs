//! The multiplication potential `q ≥ 0` of the evolution model.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cantor::{cantor_membership, closed_measure_table, CantorSpec};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, SimpsonOptions};

/// Number of terms in the Weierstrass-type potential.
pub const WEIERSTRASS_TERMS: u32 = 12;

/// Quadrature settings for potentials without a closed-form antiderivative.
pub const CUSTOM_QUADRATURE: SimpsonOptions = SimpsonOptions { abs_tol: 1e-10, max_depth: 40 };

/// One level of a slow-convergence witness: a tent train of height `height`
/// on the cells `[j/n, (j+1)/n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessLevel {
    pub n: u64,
    pub delta: f64,
    pub height: f64,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PotentialKind {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
    HolderKink { beta: f64 },
    Weierstrass { beta: f64 },
    Cantor(CantorSpec),
    Witness(Vec<WitnessLevel>),
    Custom(Evaluator),
}

impl PotentialKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PotentialKind::Constant { .. } => "constant",
            PotentialKind::Linear { .. } => "linear",
            PotentialKind::HolderKink { .. } => "holder_kink",
            PotentialKind::Weierstrass { .. } => "weierstrass",
            PotentialKind::Cantor(_) => "cantor",
            PotentialKind::Witness(_) => "witness",
            PotentialKind::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Constant { value } => write!(f, "Constant({value})"),
            PotentialKind::Linear { intercept, slope } => write!(f, "Linear({intercept} + {slope}·t)"),
            PotentialKind::HolderKink { beta } => write!(f, "HolderKink(β = {beta})"),
            PotentialKind::Weierstrass { beta } => write!(f, "Weierstrass(β = {beta})"),
            PotentialKind::Cantor(spec) => write!(f, "Cantor({spec:?})"),
            PotentialKind::Witness(levels) => write!(f, "Witness({levels:?})"),
            PotentialKind::Custom(_) => f.write_str("Custom(<fn>)"),
        }
    }
}

/// Hölder data `|q(x) − q(y)| ≤ constant·|x − y|^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    pub beta: f64,
    pub constant: f64,
}

/// Serializable description of every potential except custom closures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialDescriptor {
    Constant { value: f64 },
    Linear { intercept: f64, slope: f64 },
    HolderKink { beta: f64 },
    Weierstrass { beta: f64 },
    Cantor { level_cap: u32 },
    Witness { levels: Vec<(u64, f64)> },
}

#[derive(Debug, Clone)]
pub struct ScalarPotential {
    kind: PotentialKind,
    holder: Option<Holder>,
    sup_norm: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

/// Integral of the unit tent `1 − |2f − 1|` over `[0, f]`.
fn tent_integral(f: f64) -> f64 {
    if f <= 0.5 {
        f * f
    } else {
        0.5 - (1.0 - f) * (1.0 - f)
    }
}

fn weierstrass_holder_constant(beta: f64) -> f64 {
    // |q(x) − q(y)| ≤ f(h) = Σ 2^{−βk} min(1, π2^k h/2) with h = |x − y|. On
    // each piece f is affine, so f(h)/h^β peaks at a breakpoint or at h = 1.
    let f = |h: f64| -> f64 {
        (1..=WEIERSTRASS_TERMS)
            .map(|k| 2f64.powf(-beta * k as f64) * (std::f64::consts::PI * 2f64.powi(k as i32) * h / 2.0).min(1.0))
            .sum()
    };
    let mut candidates: Vec<f64> = (1..=WEIERSTRASS_TERMS)
        .map(|k| 2.0 / (std::f64::consts::PI * 2f64.powi(k as i32)))
        .filter(|&h| h <= 1.0)
        .collect();
    candidates.push(1.0);
    candidates.iter().map(|&h| f(h) / h.powf(beta)).fold(0.0, f64::max)
}

impl ScalarPotential {
    pub fn constant(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::Domain(format!("potential must be nonnegative, got {value}")));
        }
        Ok(Self {
            kind: PotentialKind::Constant { value },
            holder: Some(Holder { beta: 1.0, constant: 0.0 }),
            sup_norm: value,
        })
    }

    /// `q(t) = intercept + slope·t`, nonnegative on `[0, 1]`.
    pub fn linear(intercept: f64, slope: f64) -> Result<Self> {
        if !(intercept >= 0.0 && intercept + slope >= 0.0 && slope.is_finite() && intercept.is_finite()) {
            return Err(Error::Domain("linear potential must be nonnegative on [0, 1]".into()));
        }
        Ok(Self {
            kind: PotentialKind::Linear { intercept, slope },
            holder: Some(Holder { beta: 1.0, constant: slope.abs() }),
            sup_norm: intercept.max(intercept + slope),
        })
    }

    /// `q(t) = |t − 1/2|^β`, Hölder-β with constant 1.
    pub fn holder_kink(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self {
            kind: PotentialKind::HolderKink { beta },
            holder: Some(Holder { beta, constant: 1.0 }),
            sup_norm: 0.5f64.powf(beta),
        })
    }

    /// `q(t) = Σ_{k=1}^{12} 2^{−βk}(1 + cos(2^kπt))/2`.
    pub fn weierstrass(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let sup_norm = (1..=WEIERSTRASS_TERMS).map(|k| 2f64.powf(-beta * k as f64)).sum();
        Ok(Self {
            kind: PotentialKind::Weierstrass { beta },
            holder: Some(Holder { beta, constant: weierstrass_holder_constant(beta) }),
            sup_norm,
        })
    }

    /// Indicator of the fat Cantor set.
    pub fn cantor(spec: CantorSpec) -> Self {
        Self { kind: PotentialKind::Cantor(spec), holder: None, sup_norm: 1.0 }
    }

    /// Superposed tent trains; see [`super::slow_witness`] for the validated constructor.
    pub(crate) fn witness(levels: Vec<WitnessLevel>) -> Self {
        let lipschitz = levels.iter().map(|l| 2.0 * l.height * l.n as f64).sum();
        let sup_norm = levels.iter().map(|l| l.height).sum::<f64>().min(1.0);
        let mut q = Self {
            kind: PotentialKind::Witness(levels),
            holder: Some(Holder { beta: 1.0, constant: lipschitz }),
            sup_norm,
        };
        q.sup_norm = q.max_at_kinks();
        q
    }

    /// Arbitrary `q` integrated numerically.
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, sup_norm: f64, holder: Option<Holder>) -> Result<Self> {
        if !(sup_norm >= 0.0 && sup_norm.is_finite()) {
            return Err(Error::Domain(format!("sup norm must be finite and nonnegative, got {sup_norm}")));
        }
        Ok(Self { kind: PotentialKind::Custom(Arc::new(f)), holder, sup_norm })
    }

    pub fn from_descriptor(d: &PotentialDescriptor) -> Result<Self> {
        match d {
            PotentialDescriptor::Constant { value } => Self::constant(*value),
            PotentialDescriptor::Linear { intercept, slope } => Self::linear(*intercept, *slope),
            PotentialDescriptor::HolderKink { beta } => Self::holder_kink(*beta),
            PotentialDescriptor::Weierstrass { beta } => Self::weierstrass(*beta),
            PotentialDescriptor::Cantor { level_cap } => Ok(Self::cantor(CantorSpec::new(*level_cap)?)),
            PotentialDescriptor::Witness { levels } => super::witness::slow_witness(levels),
        }
    }

    pub fn descriptor(&self) -> Option<PotentialDescriptor> {
        Some(match &self.kind {
            PotentialKind::Constant { value } => PotentialDescriptor::Constant { value: *value },
            PotentialKind::Linear { intercept, slope } => {
                PotentialDescriptor::Linear { intercept: *intercept, slope: *slope }
            }
            PotentialKind::HolderKink { beta } => PotentialDescriptor::HolderKink { beta: *beta },
            PotentialKind::Weierstrass { beta } => PotentialDescriptor::Weierstrass { beta: *beta },
            PotentialKind::Cantor(spec) => PotentialDescriptor::Cantor { level_cap: spec.level_cap },
            PotentialKind::Witness(levels) => {
                PotentialDescriptor::Witness { levels: levels.iter().map(|l| (l.n, l.delta)).collect() }
            }
            PotentialKind::Custom(_) => return None,
        })
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn holder(&self) -> Option<Holder> {
        self.holder
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Whether `q` is continuous, so that the simplex corner `s → 0⁺` is a limit
    /// of admissible points.
    pub fn is_continuous(&self) -> bool {
        !matches!(self.kind, PotentialKind::Cantor(_) | PotentialKind::Custom(_))
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.kind, PotentialKind::Custom(_) | PotentialKind::Cantor(_))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            PotentialKind::Constant { value } => *value,
            PotentialKind::Linear { intercept, slope } => intercept + slope * t,
            PotentialKind::HolderKink { beta } => (t - 0.5).abs().powf(*beta),
            PotentialKind::Weierstrass { beta } => (1..=WEIERSTRASS_TERMS)
                .map(|k| {
                    2f64.powf(-beta * k as f64) * (1.0 + (2f64.powi(k as i32) * std::f64::consts::PI * t).cos()) / 2.0
                })
                .sum(),
            PotentialKind::Cantor(spec) => {
                if cantor_membership(t, spec) {
                    1.0
                } else {
                    0.0
                }
            }
            PotentialKind::Witness(levels) => levels
                .iter()
                .map(|l| {
                    let u = t * l.n as f64;
                    let f = u - u.floor();
                    l.height * (1.0 - (2.0 * f - 1.0).abs())
                })
                .sum(),
            PotentialKind::Custom(f) => f(t),
        }
    }

    /// Exact `∫₀^x q` when a closed form exists.
    pub fn closed_antiderivative(&self, x: f64) -> Option<f64> {
        Some(match &self.kind {
            PotentialKind::Constant { value } => value * x,
            PotentialKind::Linear { intercept, slope } => intercept * x + 0.5 * slope * x * x,
            PotentialKind::HolderKink { beta } => {
                let b1 = beta + 1.0;
                let half = 0.5f64.powf(b1);
                if x <= 0.5 {
                    (half - (0.5 - x).powf(b1)) / b1
                } else {
                    (half + (x - 0.5).powf(b1)) / b1
                }
            }
            PotentialKind::Weierstrass { beta } => (1..=WEIERSTRASS_TERMS)
                .map(|k| {
                    let w = 2f64.powi(k as i32) * std::f64::consts::PI;
                    2f64.powf(-beta * k as f64) * (x / 2.0 + (w * x).sin() / (2.0 * w))
                })
                .sum(),
            PotentialKind::Witness(levels) => levels
                .iter()
                .map(|l| {
                    let n = l.n as f64;
                    let u = x * n;
                    let whole = u.floor();
                    l.height * (whole / 2.0 + tent_integral(u - whole)) / n
                })
                .sum(),
            PotentialKind::Cantor(_) | PotentialKind::Custom(_) => return None,
        })
    }

    /// `∫₀^x q`.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        Ok(self.antiderivative_table(&[x])?[0])
    }

    /// `∫₀^x q` at every abscissa; the Cantor and custom kinds share work
    /// across abscissae.
    pub fn antiderivative_table(&self, xs: &[f64]) -> Result<Vec<f64>> {
        if xs.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Domain("antiderivative abscissae must lie in [0, 1]".into()));
        }
        match &self.kind {
            PotentialKind::Cantor(spec) => Ok(closed_measure_table(spec, xs)),
            PotentialKind::Custom(f) => {
                let mut order: Vec<usize> = (0..xs.len()).collect();
                order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
                let mut out = vec![0.0; xs.len()];
                let (mut prev, mut acc) = (0.0, 0.0);
                for i in order {
                    if xs[i] > prev {
                        acc += adaptive_simpson(|y| f(y), prev, xs[i], CUSTOM_QUADRATURE)?;
                        prev = xs[i];
                    }
                    out[i] = acc;
                }
                Ok(out)
            }
            _ => Ok(xs.iter().map(|&x| self.closed_antiderivative(x).expect("closed form")).collect()),
        }
    }

    /// `∫_a^{a+len} q`, computed so that constants give `value·len` exactly.
    pub fn integral_over(&self, a: f64, len: f64) -> Result<f64> {
        match &self.kind {
            PotentialKind::Constant { value } => Ok(value * len),
            PotentialKind::Custom(f) => adaptive_simpson(|y| f(y), a, a + len, CUSTOM_QUADRATURE),
            _ => {
                let b = (a + len).min(1.0);
                let t = self.antiderivative_table(&[a, b])?;
                Ok(t[1] - t[0])
            }
        }
    }

    /// `∫_s^t q` given `F(s)` and `F(t)`; constants bypass the table.
    pub(crate) fn segment_from_table(&self, s: f64, t: f64, fs: f64, ft: f64) -> f64 {
        match &self.kind {
            PotentialKind::Constant { value } => value * (t - s),
            _ => ft - fs,
        }
    }

    /// Largest value at the kinks of a piecewise-linear witness.
    fn max_at_kinks(&self) -> f64 {
        match &self.kind {
            PotentialKind::Witness(levels) => {
                let finest = levels.iter().map(|l| l.n).max().unwrap_or(1) * 2;
                (0..=finest).map(|j| self.eval(j as f64 / finest as f64)).fold(0.0, f64::max)
            }
            _ => self.sup_norm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kink_values() {
        let q = ScalarPotential::holder_kink(0.5).unwrap();
        assert_eq!(q.eval(0.5), 0.0);
        assert!((q.eval(0.0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(ScalarPotential::holder_kink(0.0).is_err());
    }

    #[test]
    fn antiderivatives_differentiate_to_eval() {
        let qs = [
            ScalarPotential::linear(0.0, 1.0).unwrap(),
            ScalarPotential::holder_kink(0.3).unwrap(),
            ScalarPotential::weierstrass(0.5).unwrap(),
            ScalarPotential::witness(vec![WitnessLevel { n: 8, delta: 0.1, height: 0.4 }]),
        ];
        let h = 1e-6;
        for q in &qs {
            for i in 1..1000 {
                let x = (i as f64 + 0.37) / 1000.0;
                if x + h > 1.0 {
                    continue;
                }
                let d = (q.antiderivative(x + h).unwrap() - q.antiderivative(x - h).unwrap()) / (2.0 * h);
                assert!((d - q.eval(x)).abs() < 1e-6, "{q:?} at {x}");
            }
        }
    }

    #[test]
    fn custom_matches_closed_form() {
        let q = ScalarPotential::custom(|y| y * y, 1.0, None).unwrap();
        let t = q.antiderivative_table(&[1.0, 0.5, 0.0]).unwrap();
        assert!((t[0] - 1.0 / 3.0).abs() < 1e-10);
        assert!((t[1] - 1.0 / 24.0).abs() < 1e-10);
        assert_eq!(t[2], 0.0);
    }

    #[test]
    fn descriptor_round_trip() {
        let q = ScalarPotential::weierstrass(0.7).unwrap();
        let d = q.descriptor().unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"kind":"weierstrass","beta":0.7}"#);
        let back: PotentialDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn weierstrass_holder_quotient_on_grid() {
        for beta in [0.3, 0.5, 0.7, 1.0] {
            let q = ScalarPotential::weierstrass(beta).unwrap();
            let l = q.holder().unwrap().constant;
            let xs: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
            let vals: Vec<f64> = xs.iter().map(|&x| q.eval(x)).collect();
            for i in 0..xs.len() {
                for j in (i + 1)..xs.len() {
                    let quotient = (vals[i] - vals[j]).abs() / (xs[j] - xs[i]).powf(beta);
                    assert!(quotient <= l * (1.0 + 1e-12));
                }
            }
        }
    }
}
