//! Exact scalar reduction of the evolution-semigroup Trotter example.

mod bridge;
mod cantor;
mod potential;
mod riemann;
mod witness;

pub use bridge::{discretized_bridge, BridgeReport, MAX_BRIDGE_GRID};
pub use cantor::{
    cantor_membership, cantor_open_measure, cantor_window, closed_measure_table, level_measure_below, CantorMeasure,
    CantorSpec, DEFAULT_LEVEL_CAP, MAX_LEVEL_CAP, MAX_WINDOW_LEVEL,
};
pub use potential::{
    Holder, PotentialDescriptor, PotentialKind, ScalarPotential, WitnessLevel, CUSTOM_QUADRATURE, WEIERSTRASS_TERMS,
};
pub use riemann::{
    left_sum, operator_error_sandwich, propagator_exact, riemann_error, sup_riemann_error, sup_riemann_error_detail,
    trotter_propagator, SimplexPoint, SupEstimate, SupSource, MIN_GRID_DENSITY,
};
pub use witness::{slow_witness, witness_errors, HEIGHT_FACTOR};

use crate::error::Result;

/// Variants offered by [`make_holder_potential`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderVariant {
    Kink,
    Weierstrass,
}

pub fn make_holder_potential(beta: f64, variant: HolderVariant) -> Result<ScalarPotential> {
    match variant {
        HolderVariant::Kink => ScalarPotential::holder_kink(beta),
        HolderVariant::Weierstrass => ScalarPotential::weierstrass(beta),
    }
}
