//! Compares the data-parallel kernels on the default rayon pool against a
//! pinned single-thread pool. The parallel sites are operator matrix assembly
//! (one spectral solve per column) and the exact Hardy-Littlewood maximal
//! operator (left edges distributed over blocks).
//!
//! Build with `--no-default-features` to measure the fully sequential
//! fallback, where rayon is not linked into the library at all; the
//! single-thread pool here only constrains the parallel build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use whlab::grid::GridDomain;
use whlab::operator::wiener_hopf;
use whlab::spaces::{maximal_operator, GridFunction};
use whlab::symbol::Symbol;

fn one_thread() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
}

fn assembly(c: &mut Criterion) {
    let a = Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(1)]);
    let mut g = c.benchmark_group("wiener_hopf_assembly");
    g.sample_size(10);
    for &n in &[256_usize, 512] {
        let half = GridDomain::half_line(40.0, n);
        g.bench_with_input(BenchmarkId::new("default_pool", n), &n, |b, _| {
            b.iter(|| wiener_hopf(&a, half).unwrap())
        });
        let pool = one_thread();
        g.bench_with_input(BenchmarkId::new("one_thread", n), &n, |b, _| {
            b.iter(|| pool.install(|| wiener_hopf(&a, half).unwrap()))
        });
    }
    g.finish();
}

fn maximal(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximal_operator");
    g.sample_size(20);
    for &n in &[2048_usize, 4096] {
        let d = GridDomain::half_line(64.0, n);
        let f = GridFunction::from_fn(d, |x| {
            Complex64::new((1.0 + x).recip(), (0.3 * x).sin() / (1.0 + 0.1 * x))
        });
        g.bench_with_input(BenchmarkId::new("default_pool", n), &f, |b, f| {
            b.iter(|| maximal_operator(f))
        });
        let pool = one_thread();
        g.bench_with_input(BenchmarkId::new("one_thread", n), &f, |b, f| {
            b.iter(|| pool.install(|| maximal_operator(f)))
        });
    }
    g.finish();
}

criterion_group!(benches, assembly, maximal);
criterion_main!(benches);
