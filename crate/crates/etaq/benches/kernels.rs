//! Criterion benches for the hot kernels: the lattice-sum enumeration in its
//! sequential and rayon forms, the identity-grid runner under different
//! thread counts, and the core series arithmetic.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use etaq::identities::{grid_jobs, run_jobs, IdentityId};
use etaq::products::euler_series;
use etaq::theta::c_series_sequential;

fn bench_c_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_c_series");
    group.sample_size(10);
    for (a, order) in [(4usize, 100usize), (6, 60), (8, 40)] {
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("a{a}_o{order}")),
            &(a, order),
            |bench, &(a, order)| bench.iter(|| black_box(c_series_sequential(a, order))),
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("a{a}_o{order}")),
            &(a, order),
            |bench, &(a, order)| bench.iter(|| black_box(etaq::theta::c_series_parallel(a, order))),
        );
    }
    group.finish();
}

fn bench_identity_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity_grid");
    group.sample_size(10);
    let jobs = grid_jobs(IdentityId::Kid, &[("t".to_string(), 1, 8)], 80, None).unwrap();
    group.bench_function("jobs_1", |bench| {
        bench.iter(|| black_box(run_jobs(&jobs, 1)));
    });
    #[cfg(feature = "parallel")]
    group.bench_function("jobs_8", |bench| {
        bench.iter(|| black_box(run_jobs(&jobs, 8)));
    });
    group.finish();
}

fn bench_series_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_kernels");
    group.sample_size(10);
    group.bench_function("euler_recip_order_2000", |bench| {
        bench.iter(|| black_box(euler_series(1, 2000).recip().unwrap()));
    });
    group.bench_function("saito_series_n60_order_400", |bench| {
        bench.iter(|| black_box(etaq::saito::saito_series(60, 400)));
    });
    group.bench_function("d_specialized_a3_r1_m5_order_200", |bench| {
        bench.iter(|| black_box(etaq::theta::d_specialized(3, 1, 5, 200).unwrap()));
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_c_series,
    bench_identity_grid,
    bench_series_kernels
);
criterion_main!(benches);
