//! Trotter products, error curves, rate fits and the theorem constant ledger.

mod constants;
mod envelope;
mod fit;
mod lemmas;
mod product;

pub use constants::{
    measure_constants, relative_bound_estimate, select_eta, theorem_constants, zeta_sum, MeasuredConstants,
    RelativeBound, TheoremConstants, ETA_EXPONENTS, TARGET_RELATIVE_BOUND,
};
pub use envelope::{envelope_check, envelope_value, EnvelopeReport};
pub use fit::{fit_rate, RateFit, MIN_FIT_POINTS, ROUNDOFF_FLOOR};
pub use lemmas::{lemma_bound_checks, LEMMA_MAX_K, LEMMA_TAUS};
pub use product::{
    dyadic_ns, trotter_error_curve, trotter_product, trotter_step, CurvePoint, ErrorCurve, Ordering,
};
