use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use gradus::algebra::{free_algebra, polynomial_algebra};
use gradus::hochschild::{cohomology, differential_matrix};
use gradus::stability::{check_q_stability, SearchConfig, StabilityParameter};
use gradus::{Field, Matrix};

fn hilbert_like(field: Field, n: usize) -> Matrix {
    let rows: Vec<Vec<_>> =
        (0..n).map(|i| (0..n).map(|j| field.from_i64(((i * 7 + j * 13) % 11) as i64 - 5)).collect()).collect();
    Matrix::from_dense(field, n, n, &rows).unwrap()
}

fn rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for n in [16, 48] {
        for field in [Field::Rational, Field::Prime(32003)] {
            let m = hilbert_like(field, n);
            g.bench_with_input(BenchmarkId::new(field.to_string(), n), &m, |b, m| b.iter(|| black_box(m.rank())));
        }
    }
    g.finish();
}

fn hochschild(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    for field in [Field::Rational, Field::Prime(5)] {
        let a = polynomial_algebra(2, 3, field).unwrap();
        g.bench_function(BenchmarkId::new("k[x,y]_{<=3}", field.to_string()), |b| b.iter(|| black_box(cohomology(&a, 2))));
    }
    let free = free_algebra(2, 3, Field::Prime(3)).unwrap();
    g.bench_function("differential k<x,y>_{<=3} p=1", |b| b.iter(|| black_box(differential_matrix(&free, 1))));
    g.finish();
}

fn stability(c: &mut Criterion) {
    let mut g = c.benchmark_group("stability");
    g.sample_size(20);
    let a = polynomial_algebra(2, 3, Field::Prime(3)).unwrap();
    let theta = StabilityParameter::standard(a.dims()).unwrap();
    g.bench_function("exhaustive k[x,y]_{<=3} gf(3)", |b| {
        b.iter(|| black_box(check_q_stability(&a, &theta, &SearchConfig::exhaustive(Some(2))).unwrap()))
    });
    let q = polynomial_algebra(2, 3, Field::Rational).unwrap();
    g.bench_function("heuristic k[x,y]_{<=3} rational", |b| {
        b.iter(|| black_box(check_q_stability(&q, &theta, &SearchConfig::heuristic(0, 32, Some(2))).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, rank, hochschild, stability);
criterion_main!(benches);
