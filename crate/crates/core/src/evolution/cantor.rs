//! The fat Cantor set `𝒞 = [0,1] ∖ ∪_{n≥1} 𝒪_n`, where `𝒪_n` is the union of
//! the open intervals of radius `2^{−(2n+2)}` around the points `k/2^n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of construction levels resolved.
pub const DEFAULT_LEVEL_CAP: u32 = 26;
/// Largest level cap the exact arithmetic supports.
pub const MAX_LEVEL_CAP: u32 = 26;
/// Largest `m` for which [`cantor_window`] is offered.
pub const MAX_WINDOW_LEVEL: u32 = 14;

/// Exponent of the integer unit `2^{−UNIT_BITS}` used for exact measures.
const UNIT_BITS: u32 = 118;
const ONE: u128 = 1u128 << UNIT_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CantorSpec {
    pub level_cap: u32,
}

impl Default for CantorSpec {
    fn default() -> Self {
        Self { level_cap: DEFAULT_LEVEL_CAP }
    }
}

impl CantorSpec {
    pub fn new(level_cap: u32) -> Result<Self> {
        if level_cap == 0 || level_cap > MAX_LEVEL_CAP {
            return Err(Error::Resolution(format!(
                "level cap must lie in 1..={MAX_LEVEL_CAP}, got {level_cap}"
            )));
        }
        Ok(Self { level_cap })
    }

    /// Measure of the unresolved levels, `Σ_{n>N} 2^{−(n+1)} = 2^{−(N+1)}`.
    pub fn tail_uncertainty(&self) -> f64 {
        0.5f64.powi(self.level_cap as i32 + 1)
    }
}

/// `true` iff `t ∈ 𝒞` at the resolved levels.
///
/// Every operation is exact in binary floating point: `t·2^n` is a scaling,
/// the distance to the nearest integer is a Sterbenz subtraction, and the
/// radius `2^{−(n+2)}` is a power of two.
pub fn cantor_membership(t: f64, spec: &CantorSpec) -> bool {
    if !(0.0..=1.0).contains(&t) {
        return false;
    }
    if t == 0.0 || t == 1.0 {
        // The end intervals are (0, r) and (1 − r, 1).
        return true;
    }
    for n in 1..=spec.level_cap as i32 {
        let x = t * 2f64.powi(n);
        let dist = (x - x.round()).abs();
        if dist < 2f64.powi(-(n + 2)) {
            return false;
        }
    }
    true
}

/// `ε_m = 1/(3·2^{2m+2})` and `1 − ε_m`; any `s ∈ (0, ε_m)`, `t ∈ (1−ε_m, 1)`
/// puts every sample `s + k(t−s)/2^m` inside an interval of level `m`.
pub fn cantor_window(m: u32) -> Result<(f64, f64)> {
    if m == 0 || m > MAX_WINDOW_LEVEL {
        return Err(Error::Resolution(format!(
            "window level must lie in 1..={MAX_WINDOW_LEVEL}, got {m}"
        )));
    }
    let eps = 1.0 / (3.0 * 2f64.powi(2 * m as i32 + 2));
    Ok((eps, 1.0 - eps))
}

/// Closed form of `|𝒪_n ∩ (0, x)|` for a single level.
pub fn level_measure_below(n: u32, x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let period = 0.5f64.powi(n as i32);
    let r = 0.5f64.powi(2 * n as i32 + 2);
    let y = x + r;
    let j = (y / period).floor();
    let rem = y - j * period;
    j * 2.0 * r + rem.min(2.0 * r) - r
}

/// Measures of `𝒪` restricted to a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorMeasure {
    pub window: (f64, f64),
    /// `|𝒪_{≤N} ∩ window|` after merging overlaps.
    pub open_measure: f64,
    /// `|window| − open_measure`, an upper bound for `|𝒞 ∩ window|`.
    pub closed_measure: f64,
    /// The true `|𝒞 ∩ window|` lies within this much below `closed_measure`.
    pub uncertainty: f64,
    /// `|𝒪_n ∩ window|` per level before merging.
    pub per_level: Vec<f64>,
}

pub fn cantor_open_measure(spec: &CantorSpec, window: Option<(f64, f64)>) -> Result<CantorMeasure> {
    let (s, t) = window.unwrap_or((0.0, 1.0));
    if !(0.0 <= s && s <= t && t <= 1.0) {
        return Err(Error::Domain(format!("window ({s}, {t}) is not inside [0, 1]")));
    }
    let f = closed_measure_table(spec, &[s, t]);
    let closed_measure = f[1] - f[0];
    let per_level = (1..=spec.level_cap)
        .map(|n| level_measure_below(n, t) - level_measure_below(n, s))
        .collect();
    Ok(CantorMeasure {
        window: (s, t),
        open_measure: (t - s) - closed_measure,
        closed_measure,
        uncertainty: spec.tail_uncertainty(),
        per_level,
    })
}

/// Exact conversion of `x ∈ [0, 1]` to units of `2^{−UNIT_BITS}`, rounding down
/// below the unit.
fn to_units(x: f64) -> u128 {
    if x <= 0.0 {
        return 0;
    }
    if x >= 1.0 {
        return ONE;
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mantissa, e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    let shift = e + UNIT_BITS as i32;
    if shift >= 0 {
        (mantissa as u128) << shift
    } else if shift > -64 {
        (mantissa as u128) >> (-shift)
    } else {
        0
    }
}

fn from_units(u: u128) -> f64 {
    u as f64 * 0.5f64.powi(UNIT_BITS as i32)
}

/// `|𝒞_N ∩ (0, x)|` at every abscissa, where `𝒞_N` is the complement of
/// the first `N` levels. One left-to-right pass over the uncovered gaps.
pub fn closed_measure_table(spec: &CantorSpec, xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let sorted: Vec<u128> = order.iter().map(|&i| to_units(xs[i])).collect();
    let mut walker = GapWalker {
        cap: spec.level_cap,
        xs: &sorted,
        next: 0,
        acc: 0,
        out: vec![0; sorted.len()],
    };
    walker.descend(0, ONE, 1);
    while walker.next < sorted.len() {
        walker.out[walker.next] = walker.acc;
        walker.next += 1;
    }
    let mut result = vec![0.0; xs.len()];
    for (slot, &i) in order.iter().enumerate() {
        result[i] = from_units(walker.out[slot]);
    }
    result
}

struct GapWalker<'a> {
    cap: u32,
    xs: &'a [u128],
    next: usize,
    acc: u128,
    out: Vec<u128>,
}

impl GapWalker<'_> {
    /// Carve the gap `(a, b)` by the intervals of `level` and recurse.
    fn descend(&mut self, a: u128, b: u128, level: u32) {
        if a >= b {
            return;
        }
        if level > self.cap {
            self.leaf(a, b);
            return;
        }
        let period = ONE >> level;
        let r = ONE >> (2 * level + 2);
        // Centres k·period whose open interval meets (a, b).
        let k_lo = if a >= r { (a - r) / period + 1 } else { 0 };
        let k_hi = (b + r).div_ceil(period) - 1;
        let k_max = 1u128 << level;
        let mut cursor = a;
        let mut k = k_lo;
        // Even centres lie inside a coarser interval already removed.
        if level > 1 && k % 2 == 0 {
            k += 1;
        }
        let step = if level > 1 { 2 } else { 1 };
        while k <= k_hi.min(k_max) {
            let c = k * period;
            let lo = c.saturating_sub(r).max(a);
            let hi = (c + r).min(b);
            if lo > cursor {
                self.descend(cursor, lo, level + 1);
            }
            cursor = cursor.max(hi);
            k += step;
        }
        if cursor < b {
            self.descend(cursor, b, level + 1);
        }
    }

    fn leaf(&mut self, a: u128, b: u128) {
        while self.next < self.xs.len() && self.xs[self.next] < b {
            let x = self.xs[self.next];
            self.out[self.next] = self.acc + x.saturating_sub(a);
            self.next += 1;
        }
        self.acc += b - a;
    }
}
