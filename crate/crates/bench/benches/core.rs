use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use subproj_bench::{complex_pair, dense_matrix, module_pair};
use subproj_core::corpus::socle_example;
use subproj_core::linalg::rref;
use subproj_core::subproj::is_subprojective_complex;
use subproj_core::{hom_space, is_subprojective};

fn bench_rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for (p, n) in [(2, 32), (2, 128), (7, 64), (65_521, 64)] {
        let m = dense_matrix(p, n);
        g.bench_with_input(BenchmarkId::new(format!("p{p}"), n), &m, |b, m| b.iter(|| rref(black_box(m))));
    }
    g.finish();
}

fn bench_hom_space(c: &mut Criterion) {
    let (m, n) = module_pair(3);
    let big_m = m.direct_sum(&m).direct_sum(&n);
    let big_n = n.direct_sum(&m);
    c.bench_function("hom_space/ut2_small", |b| b.iter(|| hom_space(black_box(&m), black_box(&n))));
    c.bench_function("hom_space/ut2_sums", |b| b.iter(|| hom_space(black_box(&big_m), black_box(&big_n))));
    c.bench_function("is_subprojective/ut2_sums", |b| {
        b.iter(|| is_subprojective(black_box(&big_m), black_box(&big_n)))
    });
}

fn bench_complexes(c: &mut Criterion) {
    let ex = socle_example();
    c.bench_function("is_subprojective_complex/socle_example", |b| {
        b.iter(|| is_subprojective_complex(black_box(&ex.disk), black_box(&ex.n)))
    });
    for w in [2, 4] {
        let (m, n) = complex_pair(w);
        c.bench_function(&format!("is_subprojective_complex/f2x2_window{w}"), |b| {
            b.iter(|| is_subprojective_complex(black_box(&m), black_box(&n)))
        });
    }
}

criterion_group!(benches, bench_rref, bench_hom_space, bench_complexes);
criterion_main!(benches);
