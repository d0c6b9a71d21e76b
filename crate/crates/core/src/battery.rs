//! Seeded random generator batteries.
//!
//! Every battery draws from a ChaCha8 stream derived from `(seed, stream)`, so
//! independent cells can be generated in any order and still reproduce.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::operator::GeneratorSpec;

/// Seed used when a configuration does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

/// Dimensions of the standard SPD battery.
pub const SPD_DIMS: [usize; 4] = [1, 2, 8, 16];
/// Matrices drawn per dimension in the standard SPD battery.
pub const SPD_PER_DIM: usize = 3;
/// Spectrum range of the standard SPD battery.
pub const SPD_SPECTRUM: (f64, f64) = (0.1, 10.0);

/// Dimensions cycled through by the Trotter pair battery.
pub const PAIR_DIMS: [usize; 5] = [2, 4, 6, 8, 16];
/// Spectrum range of `A` in a Trotter pair.
pub const PAIR_SPECTRUM: (f64, f64) = (0.5, 4.0);

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    gaussian(rng, dim, dim).qr().q()
}

/// `QΛQᵀ` with Haar-like `Q` and a log-uniform spectrum in `[lo, hi]`.
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Result<GeneratorSpec> {
    let q = random_orthogonal(rng, dim);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut diag = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        diag[(i, i)] = (llo + (lhi - llo) * rng.random::<f64>()).exp();
    }
    let a = &q * diag * q.transpose();
    let sym = (&a + a.transpose()) * 0.5;
    GeneratorSpec::from_real(&sym)
}

/// `GGᵀ·psd/dim + (K − Kᵀ)·skew/(2√dim)`: accretive, generally non-normal.
pub fn random_accretive(rng: &mut ChaCha8Rng, dim: usize, psd: f64, skew: f64) -> Result<GeneratorSpec> {
    let g = gaussian(rng, dim, dim);
    let k = gaussian(rng, dim, dim);
    let d = dim as f64;
    let p = &g * g.transpose() * (psd / d);
    let s = (&k - k.transpose()) * (skew / (2.0 * d.sqrt()));
    GeneratorSpec::from_real(&(p + s))
}

/// SPD matrices over [`SPD_DIMS`], [`SPD_PER_DIM`] per dimension.
pub fn spd_battery(seed: u64) -> Result<Vec<GeneratorSpec>> {
    spd_battery_with(seed, &SPD_DIMS, SPD_PER_DIM)
}

/// `per_dim` SPD matrices for each entry of `dims`, spectrum [`SPD_SPECTRUM`].
pub fn spd_battery_with(seed: u64, dims: &[usize], per_dim: usize) -> Result<Vec<GeneratorSpec>> {
    let mut out = Vec::new();
    for (di, &dim) in dims.iter().enumerate() {
        for j in 0..per_dim {
            let mut r = rng(seed, (di * per_dim + j) as u64);
            out.push(random_spd(&mut r, dim, SPD_SPECTRUM.0, SPD_SPECTRUM.1)?);
        }
    }
    Ok(out)
}

/// `count` pairs `(A, B)` with `A` SPD and `B` accretive of norm about one.
pub fn trotter_pairs(seed: u64, count: usize) -> Result<Vec<(GeneratorSpec, GeneratorSpec)>> {
    (0..count)
        .map(|i| {
            let dim = PAIR_DIMS[i % PAIR_DIMS.len()];
            let mut r = rng(seed, 1_000 + i as u64);
            let a = random_spd(&mut r, dim, PAIR_SPECTRUM.0, PAIR_SPECTRUM.1)?;
            let b = random_accretive(&mut r, dim, 0.5, 0.5)?;
            Ok((a, b))
        })
        .collect()
}
