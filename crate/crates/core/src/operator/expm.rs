//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection follows Higham (2005): the smallest of m ∈ {3, 5, 7, 9}
//! whose 1-norm threshold covers the input, otherwise m = 13 after scaling by
//! 2^{-s}.

use num_complex::Complex64;

use super::matrix::{identity, scale, validate_square, DenseMatrix, GeneratorSpec, NormKind};
use super::norms::norm;
use crate::error::{Error, Result};

const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `e^{-tA}` for the generator `A`.
pub fn expm(a: &GeneratorSpec, t: f64) -> Result<DenseMatrix> {
    expm_matrix(a.matrix(), t)
}

/// `e^{-tA}` for a raw square matrix.
pub fn expm_matrix(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    validate_square(a)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
    }
    Ok(exp_of(&scale(a, -t)))
}

/// `e^{X}` for a validated square matrix.
pub(crate) fn exp_of(x: &DenseMatrix) -> DenseMatrix {
    let n = x.nrows();
    let norm1 = norm(x, NormKind::One);
    if norm1 == 0.0 {
        return identity(n);
    }
    for &(m, theta) in &THETA[..4] {
        if norm1 <= theta {
            return pade(x, m);
        }
    }
    let theta13 = THETA[4].1;
    let s = if norm1 > theta13 {
        (norm1 / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let xs = scale(x, 0.5f64.powi(s));
    let mut r = pade(&xs, 13);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pade(x: &DenseMatrix, m: usize) -> DenseMatrix {
    let n = x.nrows();
    let id = identity(n);
    let x2 = x * x;
    let (u, v) = match m {
        13 => {
            let b = &B13;
            let x4 = &x2 * &x2;
            let x6 = &x4 * &x2;
            let u_inner = &x6 * (&x6 * c(b[13]) + &x4 * c(b[11]) + &x2 * c(b[9]))
                + &x6 * c(b[7])
                + &x4 * c(b[5])
                + &x2 * c(b[3])
                + &id * c(b[1]);
            let u = x * u_inner;
            let v = &x6 * (&x6 * c(b[12]) + &x4 * c(b[10]) + &x2 * c(b[8]))
                + &x6 * c(b[6])
                + &x4 * c(b[4])
                + &x2 * c(b[2])
                + &id * c(b[0]);
            (u, v)
        }
        _ => {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                9 => &B9,
                _ => unreachable!("unsupported Padé degree {m}"),
            };
            // Even powers I, X², X⁴, ...
            let mut powers = vec![id.clone(), x2.clone()];
            while powers.len() <= m / 2 {
                let next = powers.last().unwrap() * &x2;
                powers.push(next);
            }
            let mut u_inner = DenseMatrix::zeros(n, n);
            let mut v = DenseMatrix::zeros(n, n);
            for (k, p) in powers.iter().enumerate() {
                if 2 * k + 1 <= m {
                    u_inner += p * c(b[2 * k + 1]);
                }
                v += p * c(b[2 * k]);
            }
            (x * u_inner, v)
        }
    };
    let num = &v + &u;
    let den = &v - &u;
    // The denominator is well conditioned for ‖X‖₁ ≤ θ_m.
    den.lu().solve(&num).unwrap_or_else(|| {
        panic!("Padé denominator singular for ‖X‖₁ within the admissible range")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Truncated Taylor series summed until the terms fall below machine precision.
    fn taylor_exp(x: &DenseMatrix) -> DenseMatrix {
        let n = x.nrows();
        let mut sum = identity(n);
        let mut term = identity(n);
        for k in 1..200 {
            term = &term * x * c(1.0 / k as f64);
            sum += &term;
            if norm(&term, NormKind::One) < 1e-20 {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_generator_gives_identity() {
        let a = GeneratorSpec::diagonal(&[0.0]).unwrap();
        let e = expm(&a, 5.0).unwrap();
        assert_eq!(e[(0, 0)], c(1.0));
    }

    #[test]
    fn diagonal_case() {
        let a = GeneratorSpec::diagonal(&[1.0, 2.0]).unwrap();
        let e = expm(&a, 1.0).unwrap();
        assert!((e[(0, 0)].re - (-1f64).exp()).abs() < 1e-15);
        assert!((e[(1, 1)].re - (-2f64).exp()).abs() < 1e-15);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn jordan_block_matches_taylor_oracle() {
        let a = GeneratorSpec::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let e = expm(&a, 1.0).unwrap();
        let oracle = taylor_exp(&scale(a.matrix(), -1.0));
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, 1.0]).map(c) * c((-1f64).exp());
        assert!(norm(&(&e - &oracle), NormKind::Two) < 1e-14);
        assert!(norm(&(&e - &expected), NormKind::Two) < 1e-14);
    }

    #[test]
    fn every_pade_degree_agrees_with_taylor() {
        // Norms straddling each θ_m threshold, including one that needs squaring.
        for (i, target) in [0.01, 0.2, 0.9, 2.0, 5.0, 40.0].iter().enumerate() {
            let base = DMatrix::from_fn(4, 4, |r, col| {
                c(((r * 7 + col * 3 + i) % 5) as f64 - 2.0) + Complex64::new(0.0, 0.1 * (r as f64 - col as f64))
            });
            let x = scale(&base, target / norm(&base, NormKind::One));
            let e = exp_of(&x);
            // Reference: square a heavily scaled Taylor series.
            let s = 10;
            let mut r = taylor_exp(&scale(&x, 0.5f64.powi(s)));
            for _ in 0..s {
                r = &r * &r;
            }
            let rel = norm(&(&e - &r), NormKind::Two) / norm(&r, NormKind::Two);
            assert!(rel < 1e-12, "target {target}: relative error {rel:e}");
        }
    }

    #[test]
    fn rejects_negative_time_and_nonsquare() {
        let a = GeneratorSpec::diagonal(&[1.0]).unwrap();
        assert!(matches!(expm(&a, -1.0), Err(Error::Domain(_))));
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(expm_matrix(&rect, 1.0), Err(Error::Dimension(_))));
    }
}
