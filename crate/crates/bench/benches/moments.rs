use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pencil_core::haar_mc::sample_haar;
use pencil_core::lr::lr_coefficient;
use pencil_core::moments::{exact_identity_moment, exact_scalar_moment, homogeneous_coefficient};
use pencil_core::{MatrixTuple, Partition, ScalarTuple};

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn exact_moments(c: &mut Criterion) {
    let x = ScalarTuple::parse("0.3,0.4").unwrap();
    c.bench_function("exact_scalar_moment d=20 g=2", |b| {
        b.iter(|| exact_scalar_moment(black_box(20), &x, &x).unwrap())
    });
    // The bracket cache is warm after the first call; this measures the summation.
    c.bench_function("exact_identity_moment d=6 k=2 g=2", |b| {
        b.iter(|| exact_identity_moment(black_box(6), 2, &x, None).unwrap())
    });
}

fn littlewood_richardson(c: &mut Criterion) {
    let (l, mu, nu) = (p(&[6, 5, 4, 3, 2]), p(&[4, 3, 2, 1]), p(&[4, 3, 2, 1]));
    // Memoized after the first call, so this is the lookup cost.
    c.bench_function("lr_coefficient |lambda|=20", |b| {
        b.iter(|| lr_coefficient(black_box(&l), &mu, &nu))
    });
}

fn haar(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in [4usize, 30] {
        c.bench_function(&format!("sample_haar d={d}"), |b| b.iter(|| sample_haar(black_box(d), &mut rng)));
    }
}

fn homogeneous(c: &mut Criterion) {
    let m = |a: f64, b: f64| {
        pencil_core::CMatrix::from_fn(2, 2, |i, j| num_complex::Complex64::new(a * (i + 1) as f64, b * (j as f64 - 0.5)))
    };
    let x = MatrixTuple::new(vec![m(0.1, 0.2), m(0.15, -0.1)]).unwrap();
    c.bench_function("homogeneous_coefficient n=5 k=2 g=2", |b| {
        b.iter(|| homogeneous_coefficient(black_box(5), &x, &x).unwrap())
    });
}

criterion_group!(benches, exact_moments, littlewood_richardson, haar, homogeneous);
criterion_main!(benches);
