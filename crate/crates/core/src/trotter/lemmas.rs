use rayon::prelude::*;

use super::constants::TheoremConstants;
use crate::checks::{BoundCheckReport, CheckParams, LemmaId};
use crate::error::{Error, Result};
use crate::operator::norms::norm2;
use crate::operator::{expm, inverse, GeneratorSpec};

/// Step sizes of the standard lemma battery.
pub const LEMMA_TAUS: [f64; 7] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
/// Largest power `k` in the smoothing-product battery.
pub const LEMMA_MAX_K: u64 = 64;

/// Local-error, second-order and smoothing-product bounds for the pair
/// shifted by `k.eta`, over every `τ` and `k` of the grids.
pub fn lemma_bound_checks(
    a: &GeneratorSpec,
    b: &GeneratorSpec,
    k: &TheoremConstants,
    tau_grid: &[f64],
    k_grid: &[u64],
) -> Result<Vec<BoundCheckReport>> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension("A and B differ in dimension".into()));
    }
    let a_t = a.shifted(k.eta)?;
    let h_t = a_t.sum(b)?;
    let a_inv = inverse(a_t.matrix())?;
    let dim = a.dim();
    let reports = tau_grid
        .par_iter()
        .map(|&tau| -> Result<Vec<BoundCheckReport>> {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Error::Domain(format!("tau must be nonnegative, got {tau}")));
            }
            let ea = expm(&a_t, tau)?;
            let eb = expm(b, tau)?;
            let eh = expm(&h_t, tau)?;
            let ba = &eb * &ea;
            let ab = &ea * &eb;
            let d_ba = &ba - &eh;
            let d_ab = &ab - &eh;
            let p = |n: Option<u64>| CheckParams { t: Some(tau), n, alpha: Some(k.alpha), ..Default::default() };
            let mut out = vec![
                BoundCheckReport::new(LemmaId::LocalErrorLeft, dim, p(None), norm2(&(&a_inv * &d_ba)), k.l1 * tau),
                BoundCheckReport::new(LemmaId::LocalErrorRight, dim, p(None), norm2(&(&d_ba * &a_inv)), k.l1 * tau),
                BoundCheckReport::new(
                    LemmaId::SecondOrderBa,
                    dim,
                    p(None),
                    norm2(&(&a_inv * &d_ba * &a_inv)),
                    k.l2 * tau * tau,
                ),
                BoundCheckReport::new(
                    LemmaId::SecondOrderAb,
                    dim,
                    p(None),
                    norm2(&(&a_inv * &d_ab * &a_inv)),
                    k.l2 * tau * tau,
                ),
            ];
            if tau > 0.0 {
                let max_k = k_grid.iter().copied().max().unwrap_or(0);
                let mut power = a_t.matrix().clone();
                for step in 1..=max_k {
                    power = &ba * &power;
                    if !k_grid.contains(&step) {
                        continue;
                    }
                    let kf = step as f64;
                    let rhs = match k.l3 {
                        Some(l3) if k.alpha > 0.0 => l3 / tau.powf(k.alpha) + k.c_a_prime / (kf * tau),
                        _ => k.l3_tilde * (1.0 + kf.ln()) + k.c_a_prime / (kf * tau),
                    };
                    out.push(BoundCheckReport::new(LemmaId::SmoothingProduct, dim, p(Some(step)), norm2(&power), rhs));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reports.into_iter().flatten().collect())
}
