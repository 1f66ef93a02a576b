use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use goursat_core::battery::{check_classify, check_commutation, check_winding};
use goursat_core::newton_polygon::LaurentPoly;
use goursat_core::numeric::RationalComplex;
use goursat_core::par::Execution;
use goursat_core::solvability::toeplitz_sections;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn symbol() -> LaurentPoly {
    let pairs: Vec<(i64, RationalComplex)> = (-3..=3).map(|e| (e, RationalComplex::from_frac(2 * e + 7, 3 + e.abs()))).collect();
    LaurentPoly::from_pairs(&pairs)
}

fn toeplitz_sweep(c: &mut Criterion) {
    let f = symbol();
    let mut g = c.benchmark_group("toeplitz_sections");
    g.sample_size(10);
    for n_max in [16usize, 32] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n_max), &n_max, |b, &n| {
                b.iter(|| toeplitz_sections(black_box(&f), n, exec))
            });
        }
    }
    g.finish();
}

fn battery_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("battery");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("commutation", name), |b| b.iter(|| check_commutation(42, 50, 128, exec)));
        g.bench_function(BenchmarkId::new("winding", name), |b| b.iter(|| check_winding(42, 50, 128, exec)));
        g.bench_function(BenchmarkId::new("classify", name), |b| b.iter(|| check_classify(42, 20, 128, exec)));
    }
    g.finish();
}

criterion_group!(benches, toeplitz_sweep, battery_sweep);
criterion_main!(benches);
