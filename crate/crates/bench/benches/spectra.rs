use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use minprod::{analyze, int, product_descriptor};
use minprod_bench::{clifford, sphere_laplace};

fn minkowski(c: &mut Criterion) {
    let a = sphere_laplace(3, 400);
    let b = sphere_laplace(5, 400);
    c.bench_function("minkowski S^3 + S^5 through 400", |bench| {
        bench.iter(|| black_box(&a).minkowski_sum(black_box(&b)))
    });
}

fn clifford_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("clifford");
    for dims in [vec![1, 1], vec![2, 3, 4], vec![4, 4, 4, 4, 4]] {
        let expr = clifford(&dims);
        group.bench_function(format!("jacobi through 0 {dims:?}"), |bench| {
            bench.iter(|| product_descriptor(black_box(&expr), &int(0)).unwrap())
        });
    }
    let expr = clifford(&[2, 3, 4]);
    group.bench_function("report [2, 3, 4]", |bench| bench.iter(|| analyze(black_box(&expr)).unwrap()));
    group.finish();
}

fn harmonic_oracle(c: &mut Criterion) {
    c.bench_function("harmonic rank m=4 k=6", |bench| {
        bench.iter(|| minprod::oracle::harmonic_multiplicity(black_box(4), black_box(6)))
    });
}

criterion_group!(benches, minkowski, clifford_products, harmonic_oracle);
criterion_main!(benches);
