//! Experiment configuration: JSON text with strictly checked keys.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};

use super::report::OutputFormat;
use crate::battery::{DEFAULT_SEED, SPD_DIMS, SPD_PER_DIM};
use crate::error::{Error, Result};
use crate::evolution::{HolderVariant, PotentialDescriptor, DEFAULT_LEVEL_CAP, MAX_WINDOW_LEVEL, MIN_GRID_DENSITY};
use crate::trotter::{dyadic_ns, Ordering, LEMMA_MAX_K, LEMMA_TAUS};
use crate::NormKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Section1Battery,
    TrotterRates,
    EnvelopeAudit,
    EvolutionRates,
    CantorDemo,
    SlowWitnessDemo,
    BridgeCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Section1Battery,
        ExperimentKind::TrotterRates,
        ExperimentKind::EnvelopeAudit,
        ExperimentKind::EvolutionRates,
        ExperimentKind::CantorDemo,
        ExperimentKind::SlowWitnessDemo,
        ExperimentKind::BridgeCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Section1Battery => "section1_battery",
            ExperimentKind::TrotterRates => "trotter_rates",
            ExperimentKind::EnvelopeAudit => "envelope_audit",
            ExperimentKind::EvolutionRates => "evolution_rates",
            ExperimentKind::CantorDemo => "cantor_demo",
            ExperimentKind::SlowWitnessDemo => "slow_witness_demo",
            ExperimentKind::BridgeCheck => "bridge_check",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Section1Battery => {
                "semigroup inequalities and the fractional-power oracle over a seeded SPD battery"
            }
            ExperimentKind::TrotterRates => "Trotter error curves, rate fits and envelopes for seeded accretive pairs",
            ExperimentKind::EnvelopeAudit => "lemma-level local error and smoothing bounds against the constant ledger",
            ExperimentKind::EvolutionRates => "exact Riemann-error rates for linear and Hölder potentials",
            ExperimentKind::CantorDemo => "nonconvergence for the Cantor indicator at dyadic n",
            ExperimentKind::SlowWitnessDemo => "validated gliding-hump potential with prescribed slow decay",
            ExperimentKind::BridgeCheck => "matrix-level versus scalar-level error on the discretized shift",
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

/// A configuration file as written. Parameters are checked against the
/// experiment's own key set by [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub parameters: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self { experiment, parameters: serde_json::Map::new(), output: OutputSpec::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("config: {e}")))
    }

    /// Set one parameter, as if it had been written in the file.
    pub fn with(mut self, key: &str, value: serde_json::Value) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    /// Typed parameters with defaults filled in; `seed` overrides the file.
    pub fn resolve(&self, seed: Option<u64>) -> Result<Resolved> {
        let mut map = self.parameters.clone();
        if let Some(s) = seed {
            map.insert("seed".into(), s.into());
        }
        let value = serde_json::Value::Object(map);
        let r = match self.experiment {
            ExperimentKind::Section1Battery => Resolved::Section1(parse(value)?),
            ExperimentKind::TrotterRates => Resolved::Trotter(parse(value)?),
            ExperimentKind::EnvelopeAudit => Resolved::Envelope(parse(value)?),
            ExperimentKind::EvolutionRates => Resolved::Evolution(parse(value)?),
            ExperimentKind::CantorDemo => Resolved::Cantor(parse(value)?),
            ExperimentKind::SlowWitnessDemo => Resolved::Witness(parse(value)?),
            ExperimentKind::BridgeCheck => Resolved::Bridge(parse(value)?),
        };
        r.validate()?;
        Ok(r)
    }
}

fn parse<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Usage(format!("parameters: {e}")))
}

fn usage(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Usage(format!("parameters.{key}: {msg}"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Resolved {
    Section1(Section1Params),
    Trotter(TrotterParams),
    Envelope(EnvelopeParams),
    Evolution(EvolutionParams),
    Cantor(CantorParams),
    Witness(WitnessParams),
    Bridge(BridgeParams),
}

impl Resolved {
    pub fn seed(&self) -> u64 {
        match self {
            Resolved::Section1(p) => p.seed,
            Resolved::Trotter(p) => p.seed,
            Resolved::Envelope(p) => p.seed,
            Resolved::Evolution(p) => p.seed,
            Resolved::Cantor(p) => p.seed,
            Resolved::Witness(p) => p.seed,
            Resolved::Bridge(p) => p.seed,
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("parameters serialize")
    }

    fn validate(&self) -> Result<()> {
        match self {
            Resolved::Section1(p) => {
                positive_list("dims", &p.dims)?;
                if p.per_dim == 0 {
                    return Err(usage("per_dim", "must be positive"));
                }
                for &a in &p.alphas {
                    if !(a > 0.0 && a < 1.0) {
                        return Err(usage("alphas", format!("{a} is not in (0, 1)")));
                    }
                }
                positive_reals("t_values", &p.t_values)?;
                positive_reals("mu_values", &p.mu_values)
            }
            Resolved::Trotter(p) => {
                trotter_common(p.pairs, p.alpha, &p.t_values, &p.n_list)?;
                super::classify::RateModel::parse(&p.reference).map_err(|_| usage("reference", "unparseable model"))?;
                Ok(())
            }
            Resolved::Envelope(p) => {
                trotter_common(p.pairs, p.alpha, &p.t_values, &p.n_list)?;
                if p.k_max == 0 {
                    return Err(usage("k_max", "must be positive"));
                }
                if p.tau_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                    return Err(usage("tau_grid", "entries must be finite and nonnegative"));
                }
                Ok(())
            }
            Resolved::Evolution(p) => {
                density(p.grid_density)?;
                for &b in &p.betas {
                    if !(b > 0.0 && b <= 1.0) {
                        return Err(usage("betas", format!("{b} is not in (0, 1]")));
                    }
                }
                increasing_ns("n_list", &p.n_list, 1)?;
                increasing_ns("linear_n_list", &p.linear_n_list, 1)
            }
            Resolved::Cantor(p) => {
                density(p.grid_density)?;
                if p.level_cap == 0 || p.level_cap > crate::evolution::MAX_LEVEL_CAP {
                    return Err(usage("level_cap", "out of range"));
                }
                if p.m_levels.is_empty() || p.m_levels.iter().any(|&m| m == 0 || m > MAX_WINDOW_LEVEL.min(p.level_cap)) {
                    return Err(usage("m_levels", format!("entries must lie in 1..={}", MAX_WINDOW_LEVEL.min(p.level_cap))));
                }
                Ok(())
            }
            Resolved::Witness(p) => {
                for &c in &p.reference_exponents {
                    if !(c > 0.0 && c.is_finite()) {
                        return Err(usage("reference_exponents", "entries must be positive"));
                    }
                }
                Ok(())
            }
            Resolved::Bridge(p) => {
                if p.m == 0 || p.m > crate::evolution::MAX_BRIDGE_GRID {
                    return Err(usage("m", "out of range"));
                }
                increasing_ns("n_list", &p.n_list, 1)
            }
        }
    }
}

fn positive_list(key: &str, v: &[usize]) -> Result<()> {
    if v.is_empty() || v.contains(&0) {
        return Err(usage(key, "must be a nonempty list of positive integers"));
    }
    Ok(())
}

fn positive_reals(key: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(usage(key, "entries must be positive and finite"));
    }
    Ok(())
}

fn increasing_ns(key: &str, v: &[u64], min: u64) -> Result<()> {
    if v.is_empty() || v[0] < min || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage(key, format!("must be a strictly increasing list with entries ≥ {min}")));
    }
    Ok(())
}

fn density(g: usize) -> Result<()> {
    if g < MIN_GRID_DENSITY {
        return Err(usage("grid_density", format!("must be at least {MIN_GRID_DENSITY}")));
    }
    Ok(())
}

fn trotter_common(pairs: usize, alpha: f64, t_values: &[f64], n_list: &[u64]) -> Result<()> {
    if pairs == 0 {
        return Err(usage("pairs", "must be positive"));
    }
    if !(alpha >= 0.0 && alpha < 1.0) {
        return Err(usage("alpha", format!("{alpha} is not in [0, 1)")));
    }
    positive_reals("t_values", t_values)?;
    increasing_ns("n_list", n_list, 3)
}


fn default_t_values() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_n_list() -> Vec<u64> {
    dyadic_ns(2, 12)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Section1Params {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub per_dim: usize,
    pub t_values: Vec<f64>,
    pub mu_values: Vec<f64>,
    pub alphas: Vec<f64>,
    pub taylor_orders: Vec<u64>,
    pub resolvent_orders: Vec<u64>,
    /// Run the fractional-power quadrature oracle on every matrix.
    pub frac_oracle: bool,
}

impl Default for Section1Params {
    fn default() -> Self {
        let g = crate::checks::Section1Grid::default();
        Self {
            seed: DEFAULT_SEED,
            dims: SPD_DIMS.to_vec(),
            per_dim: SPD_PER_DIM,
            t_values: g.t_values,
            mu_values: g.mu_values,
            alphas: g.alphas,
            taylor_orders: g.taylor_orders,
            resolvent_orders: g.resolvent_orders,
            frac_oracle: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrotterParams {
    pub seed: u64,
    pub pairs: usize,
    pub t_values: Vec<f64>,
    pub n_list: Vec<u64>,
    pub alpha: f64,
    pub orderings: Vec<Ordering>,
    pub norm: NormKind,
    pub min_gamma: f64,
    /// Reference model for the informational Landau verdict.
    pub reference: String,
}

impl Default for TrotterParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            pairs: 10,
            t_values: default_t_values(),
            n_list: default_n_list(),
            alpha: 0.5,
            orderings: Ordering::ALL.to_vec(),
            norm: NormKind::Two,
            min_gamma: 0.85,
            reference: "n^-1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvelopeParams {
    pub seed: u64,
    pub pairs: usize,
    pub alpha: f64,
    pub tau_grid: Vec<f64>,
    pub k_max: u64,
    pub t_values: Vec<f64>,
    pub n_list: Vec<u64>,
    pub orderings: Vec<Ordering>,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            pairs: 10,
            alpha: 0.5,
            tau_grid: LEMMA_TAUS.to_vec(),
            k_max: LEMMA_MAX_K,
            t_values: default_t_values(),
            n_list: default_n_list(),
            orderings: Ordering::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionParams {
    pub seed: u64,
    pub betas: Vec<f64>,
    pub variants: Vec<HolderVariant>,
    pub n_list: Vec<u64>,
    pub linear_n_list: Vec<u64>,
    pub grid_density: usize,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            betas: vec![0.3, 0.5, 0.7, 1.0],
            variants: vec![HolderVariant::Kink, HolderVariant::Weierstrass],
            n_list: dyadic_ns(0, 12),
            linear_n_list: default_n_list(),
            grid_density: MIN_GRID_DENSITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantorParams {
    pub seed: u64,
    #[serde(deserialize_with = "level_range")]
    pub m_levels: Vec<u32>,
    pub level_cap: u32,
    pub grid_density: usize,
}

impl Default for CantorParams {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, m_levels: (2..=6).collect(), level_cap: DEFAULT_LEVEL_CAP, grid_density: MIN_GRID_DENSITY }
    }
}

/// Accept `[2, 3, 4]` or the inclusive range `"2..6"`.
fn level_range<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<u32>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Levels {
        List(Vec<u32>),
        Range(String),
    }
    match Levels::deserialize(d)? {
        Levels::List(v) => Ok(v),
        Levels::Range(s) => {
            let parsed = s
                .split_once("..")
                .and_then(|(a, b)| Some((a.trim().parse::<u32>().ok()?, b.trim_start_matches('=').trim().parse::<u32>().ok()?)));
            match parsed {
                Some((a, b)) if a <= b => Ok((a..=b).collect()),
                _ => Err(serde::de::Error::custom(format!("invalid level range {s:?}"))),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessParams {
    pub seed: u64,
    pub levels: Vec<(u64, f64)>,
    /// Exponents `c` of the references `n^{-c}` the witnessed errors are
    /// classified against.
    pub reference_exponents: Vec<f64>,
}

impl Default for WitnessParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            levels: vec![(8, 0.2), (64, 0.05), (512, 0.0125)],
            reference_exponents: vec![0.25, 0.5, 0.75, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BridgeParams {
    pub seed: u64,
    pub m: usize,
    pub tau: f64,
    pub n_list: Vec<u64>,
    pub potential: PotentialDescriptor,
    /// Value of the constant potential used for the commuting case.
    pub commuting_value: f64,
}

impl Default for BridgeParams {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            m: 256,
            tau: 0.5,
            n_list: vec![4, 8, 16],
            potential: PotentialDescriptor::Linear { intercept: 0.0, slope: 1.0 },
            commuting_value: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_parameter_is_a_usage_error_naming_the_key() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "trotter_rates", "parameters": {"alpa": 0.5}}"#).unwrap();
        match cfg.resolve(None) {
            Err(Error::Usage(msg)) => assert!(msg.contains("alpa"), "{msg}"),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_top_level_key() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "cantor_demo", "param": {}}"#).unwrap_err();
        assert!(matches!(&err, Error::Usage(m) if m.contains("param")));
    }

    #[test]
    fn level_range_forms() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "cantor_demo", "parameters": {"m_levels": "2..6"}}"#).unwrap();
        match cfg.resolve(None).unwrap() {
            Resolved::Cantor(p) => assert_eq!(p.m_levels, vec![2, 3, 4, 5, 6]),
            other => panic!("{other:?}"),
        }
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "cantor_demo", "parameters": {"m_levels": [3, 4]}}"#).unwrap();
        assert!(matches!(cfg.resolve(None).unwrap(), Resolved::Cantor(p) if p.m_levels == vec![3, 4]));
    }

    #[test]
    fn seed_override_and_defaults() {
        let cfg = ExperimentConfig::new(ExperimentKind::Section1Battery).with("seed", 5.into());
        assert_eq!(cfg.resolve(None).unwrap().seed(), 5);
        assert_eq!(cfg.resolve(Some(9)).unwrap().seed(), 9);
        let v = ExperimentConfig::new(ExperimentKind::BridgeCheck).resolve(None).unwrap().to_value();
        assert_eq!(v["m"], 256);
        assert_eq!(v["potential"]["kind"], "linear");
    }

    #[test]
    fn out_of_range_values() {
        let cfg = ExperimentConfig::new(ExperimentKind::TrotterRates).with("alpha", 1.5.into());
        assert!(matches!(cfg.resolve(None), Err(Error::Usage(m)) if m.contains("alpha")));
        let cfg = ExperimentConfig::new(ExperimentKind::CantorDemo).with("m_levels", serde_json::json!([20]));
        assert!(matches!(cfg.resolve(None), Err(Error::Usage(_))));
    }
}
