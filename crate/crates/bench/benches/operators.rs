use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use trotter_core::battery::{rng, random_spd, trotter_pairs};
use trotter_core::operator::{expm, frac_power};
use trotter_core::trotter::{trotter_product, Ordering};

const DIMS: [usize; 3] = [4, 16, 64];

fn bench_expm(c: &mut Criterion) {
    let mut group = c.benchmark_group("expm");
    for dim in DIMS {
        let a = random_spd(&mut rng(1, dim as u64), dim, 0.1, 10.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| expm(black_box(a), 0.5).unwrap())
        });
    }
    group.finish();
}

fn bench_frac_power(c: &mut Criterion) {
    let mut group = c.benchmark_group("frac_power");
    for dim in DIMS {
        let a = random_spd(&mut rng(2, dim as u64), dim, 0.1, 10.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| frac_power(black_box(a), 0.5).unwrap())
        });
    }
    group.finish();
}

fn bench_trotter_product(c: &mut Criterion) {
    let pairs = trotter_pairs(3, 5).unwrap();
    let (a, b) = &pairs[4];
    let mut group = c.benchmark_group("trotter_product");
    for n in [16u64, 256, 4096] {
        for ord in Ordering::ALL {
            group.bench_with_input(BenchmarkId::new(ord.label(), n), &n, |bch, &n| {
                bch.iter(|| trotter_product(a, b, 1.0, black_box(n), ord).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_expm, bench_frac_power, bench_trotter_product);
criterion_main!(benches);
