//! Configured experiment runs with deterministic, machine-readable reports.

mod classify;
mod config;
mod report;
mod runners;

use std::time::Instant;

pub use classify::{classify_rate, classify_sequence, LandauThresholds, RateModel, Verdict, LANDAU};
pub use config::{
    BridgeParams, CantorParams, EnvelopeParams, EvolutionParams, ExperimentConfig, ExperimentKind, OutputSpec, Resolved,
    Section1Params, TrotterParams, WitnessParams,
};
pub use report::{format_real, Cell, CheckOutcome, OutputFormat, RunReport, Table, ARTIFACT_VERSION};
pub use runners::{CANTOR_FLOOR, HOLDER_SLACK, LINEAR_TOL, MONOTONE_JITTER, ORACLE_TOL};

use crate::error::Result;

/// Resolve `config`, dispatch to its battery and assemble the report.
pub fn run(config: &ExperimentConfig, seed: Option<u64>) -> Result<RunReport> {
    let start = Instant::now();
    let resolved = config.resolve(seed)?;
    let outcome = match &resolved {
        Resolved::Section1(p) => runners::section1(p),
        Resolved::Trotter(p) => runners::trotter(p),
        Resolved::Envelope(p) => runners::envelope(p),
        Resolved::Evolution(p) => runners::evolution(p),
        Resolved::Cantor(p) => runners::cantor(p),
        Resolved::Witness(p) => runners::witness(p),
        Resolved::Bridge(p) => runners::bridge(p),
    }
    .map_err(|e| e.context(config.experiment.name()))?;
    let passed = outcome.checks.iter().all(|c| c.passed);
    Ok(RunReport {
        artifact_version: ARTIFACT_VERSION.to_string(),
        experiment: config.experiment,
        seed: resolved.seed(),
        config: resolved.to_value(),
        thresholds: LANDAU,
        ledger: outcome.ledger,
        checks: outcome.checks,
        tables: outcome.tables,
        passed,
        wall_clock: start.elapsed(),
    })
}
