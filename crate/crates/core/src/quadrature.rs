//! Adaptive Simpson quadrature for scalar and vector-valued integrands.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values an adaptive rule can integrate: a vector space with a sup-norm.
pub trait Integrand: Clone {
    fn lin(a: f64, x: &Self, b: f64, y: &Self) -> Self;
    fn sup_norm(&self) -> f64;
}

impl Integrand for f64 {
    fn lin(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
    fn sup_norm(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for DVector<Complex64> {
    fn lin(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * Complex64::new(a, 0.0) + y * Complex64::new(b, 0.0)
    }
    fn sup_norm(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimpsonOptions {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
        }
    }
}

/// Integrate `f` over `[a, b]` with local error control `|S₂ − S₁|/15 ≤ tol`.
///
/// Fails rather than silently returning a coarse value when the depth cap is
/// hit before the tolerance is met.
pub fn adaptive_simpson<V, F>(f: F, a: f64, b: f64, opts: SimpsonOptions) -> Result<V>
where
    V: Integrand,
    F: Fn(f64) -> V,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, &fa, &fm, &fb);
    let mut worst = 0.0f64;
    let value = recurse(&f, a, b, &fa, &fm, &fb, whole, opts.abs_tol, opts.max_depth, &mut worst)?;
    if worst > opts.abs_tol {
        return Err(Error::Accuracy {
            requested: opts.abs_tol,
            achieved: worst,
        });
    }
    Ok(value)
}

fn simpson<V: Integrand>(a: f64, b: f64, fa: &V, fm: &V, fb: &V) -> V {
    let h = (b - a) / 6.0;
    let ends = V::lin(h, fa, h, fb);
    V::lin(1.0, &ends, 4.0 * h, fm)
}

#[allow(clippy::too_many_arguments)]
fn recurse<V, F>(
    f: &F,
    a: f64,
    b: f64,
    fa: &V,
    fm: &V,
    fb: &V,
    whole: V,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> Result<V>
where
    V: Integrand,
    F: Fn(f64) -> V,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, &flm, fm);
    let right = simpson(m, b, fm, &frm, fb);
    let both = V::lin(1.0, &left, 1.0, &right);
    let diff = V::lin(1.0, &both, -1.0, &whole);
    let err = diff.sup_norm() / 15.0;
    if err <= tol || depth == 0 || (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        if err > tol {
            *worst = worst.max(err);
        }
        // Richardson correction.
        return Ok(V::lin(1.0, &both, 1.0 / 15.0, &diff));
    }
    let l = recurse(f, a, m, fa, &flm, fm, left, 0.5 * tol, depth - 1, worst)?;
    let r = recurse(f, m, b, fm, &frm, fb, right, 0.5 * tol, depth - 1, worst)?;
    Ok(V::lin(1.0, &l, 1.0, &r))
}
