use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use formdiag::center::center_basis;
use formdiag::form::{gram_tensor, parse_form};
use formdiag::harness::{random_dense_form, random_diagonalizable};
use formdiag::{decompose, FieldConfig};
use formdiag_bench::{BINARY_QUARTIC, CUBIC_WITH_SQRT2, QUARTIC_TWO_BLOCKS, TERNARY_CUBIC};
use std::hint::black_box;

fn fixtures(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for (name, text, cfg) in [
        ("binary_quartic", BINARY_QUARTIC, FieldConfig::rational()),
        ("ternary_cubic_q", TERNARY_CUBIC, FieldConfig::rational()),
        ("ternary_cubic_sqrt-3", TERNARY_CUBIC, FieldConfig::exact(&[-3])),
        ("cubic_sqrt2", CUBIC_WITH_SQRT2, FieldConfig::exact(&[2])),
        ("quartic_blocks", QUARTIC_TWO_BLOCKS, FieldConfig::rational()),
        ("quartic_blocks_sqrt-3", QUARTIC_TWO_BLOCKS, FieldConfig::exact(&[-3])),
        ("binary_quartic_float", BINARY_QUARTIC, FieldConfig::float(1e-9)),
    ] {
        let f = parse_form(text, &cfg.field().unwrap()).unwrap();
        group.bench_function(name, |b| b.iter(|| decompose(black_box(&f), &cfg).unwrap()));
    }
    group.finish();
}

fn scaling(c: &mut Criterion) {
    let q = FieldConfig::rational().field().unwrap();
    let mut group = c.benchmark_group("random_diagonalizable");
    for n in 2..=5 {
        let f = random_diagonalizable(n, 4, 1, &q).form;
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| decompose(f, &FieldConfig::rational()).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("center_dense_cubic");
    for n in 2..=5 {
        let a = gram_tensor(&random_dense_form(n, 3, 1, &q, 4));
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| center_basis(a).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fixtures, scaling);
criterion_main!(benches);
