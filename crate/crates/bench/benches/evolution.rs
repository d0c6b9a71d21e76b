use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use trotter_core::evolution::{
    cantor_open_measure, make_holder_potential, sup_riemann_error, CantorSpec, HolderVariant,
};

fn bench_sup_riemann_error(c: &mut Criterion) {
    let mut group = c.benchmark_group("sup_riemann_error");
    group.sample_size(20);
    for variant in [HolderVariant::Kink, HolderVariant::Weierstrass] {
        let q = make_holder_potential(0.5, variant).unwrap();
        for n in [8u64, 128] {
            let id = BenchmarkId::new(format!("{variant:?}"), n);
            group.bench_with_input(id, &n, |b, &n| {
                b.iter(|| sup_riemann_error(&q, black_box(n), 64).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_cantor_measure(c: &mut Criterion) {
    let mut group = c.benchmark_group("cantor_measure");
    for cap in [10u32, 16, 20] {
        let spec = CantorSpec::new(cap).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cap), &spec, |b, spec| {
            b.iter(|| cantor_open_measure(black_box(spec), None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sup_riemann_error, bench_cantor_measure);
criterion_main!(benches);
