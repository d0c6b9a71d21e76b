use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::norms::norm;
use crate::operator::{expm, expm_matrix, identity, DenseMatrix, GeneratorSpec, NormKind};

/// Factor ordering inside one Trotter step of length `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ordering {
    /// `e^{−τB} e^{−τA}`
    #[serde(rename = "BA")]
    Ba,
    /// `e^{−τA} e^{−τB}`
    #[serde(rename = "AB")]
    Ab,
    /// `e^{−τA/2} e^{−τB} e^{−τA/2}`
    #[serde(rename = "SYM")]
    Sym,
}

impl Ordering {
    pub const ALL: [Ordering; 3] = [Ordering::Ba, Ordering::Ab, Ordering::Sym];

    pub fn label(self) -> &'static str {
        match self {
            Ordering::Ba => "BA",
            Ordering::Ab => "AB",
            Ordering::Sym => "SYM",
        }
    }
}

impl std::fmt::Display for Ordering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u64,
    pub error: f64,
}

/// Trotter errors `‖product_n − e^{−t(A+B)}‖` for a fixed `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub t: f64,
    pub ordering: Ordering,
    pub norm: NormKind,
    pub points: Vec<CurvePoint>,
}

impl ErrorCurve {
    /// Build a curve, validating that `n` increases strictly and errors are finite.
    pub fn new(t: f64, ordering: Ordering, norm: NormKind, points: Vec<CurvePoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[1].n <= w[0].n) {
            return Err(Error::InvalidInput("curve n values must increase strictly".into()));
        }
        if points.iter().any(|p| !p.error.is_finite() || p.error < 0.0) {
            return Err(Error::InvalidInput("curve errors must be finite and nonnegative".into()));
        }
        Ok(Self { t, ordering, norm, points })
    }

    pub fn ns(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.n).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.error).collect()
    }
}

/// Dyadic `n` values `2^lo, …, 2^hi`.
pub fn dyadic_ns(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

fn check_pair(a: &GeneratorSpec, b: &GeneratorSpec) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "generators of dimension {} and {} cannot be split together",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// One step of the chosen ordering at step size `tau`.
pub fn trotter_step(a: &GeneratorSpec, b: &GeneratorSpec, tau: f64, ord: Ordering) -> Result<DenseMatrix> {
    check_pair(a, b)?;
    Ok(match ord {
        Ordering::Ba => expm(b, tau)? * expm(a, tau)?,
        Ordering::Ab => expm(a, tau)? * expm(b, tau)?,
        Ordering::Sym => {
            let half = expm(a, 0.5 * tau)?;
            &half * expm(b, tau)? * &half
        }
    })
}

/// `M^n` by repeated squaring.
pub(crate) fn matrix_pow(m: &DenseMatrix, mut n: u64) -> DenseMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// The `n`-fold product of the ordering's step at `τ = t/n`.
pub fn trotter_product(a: &GeneratorSpec, b: &GeneratorSpec, t: f64, n: u64, ord: Ordering) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be finite and nonnegative, got {t}")));
    }
    let step = trotter_step(a, b, t / n as f64, ord)?;
    Ok(matrix_pow(&step, n))
}

/// Error of the ordering's product against `e^{−t(A+B)}` at each `n`.
pub fn trotter_error_curve(
    a: &GeneratorSpec,
    b: &GeneratorSpec,
    t: f64,
    ns: &[u64],
    ord: Ordering,
    norm_kind: NormKind,
) -> Result<ErrorCurve> {
    check_pair(a, b)?;
    if let Some(&bad) = ns.iter().find(|&&n| n <= 2) {
        return Err(Error::Domain(format!("curve points need n > 2, got {bad}")));
    }
    let exact = expm_matrix(&(a.matrix() + b.matrix()), t)?;
    let points = ns
        .par_iter()
        .map(|&n| {
            let p = trotter_product(a, b, t, n, ord)?;
            Ok(CurvePoint { n, error: norm(&(p - &exact), norm_kind) })
        })
        .collect::<Result<Vec<_>>>()?;
    ErrorCurve::new(t, ord, norm_kind, points)
}
