use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qwopt_bench::perturbed_icosahedron;
use qwopt_core::ljcluster::{lj_energy, lj_gradient, ClusterConfig, LjPotential};
use qwopt_core::localopt::{conjugate_gradient, quasi_newton, steepest_descent, LocalOptConfig};
use qwopt_core::objectives::{Quadratic, Rosenbrock};
use qwopt_core::{RngStream, VectorN};

fn quadratic_solvers(c: &mut Criterion) {
    let mut rng = RngStream::new(42);
    let obj = Quadratic::random_spd(8, &mut rng);
    let x0 = VectorN::zeros(8);
    let cfg = LocalOptConfig {
        grad_tol: 1e-8,
        ..LocalOptConfig::default()
    };

    c.bench_function("cg quadratic n=8", |b| {
        b.iter(|| conjugate_gradient(black_box(&obj), black_box(&x0), &cfg).unwrap())
    });
    c.bench_function("bfgs quadratic n=8", |b| {
        b.iter(|| quasi_newton(black_box(&obj), black_box(&x0), &cfg).unwrap())
    });
}

fn rosenbrock_descent(c: &mut Criterion) {
    let obj = Rosenbrock::default();
    let x0 = VectorN::new(vec![-1.2, 1.0]).unwrap();
    let cfg = LocalOptConfig {
        grad_tol: 1e-6,
        max_iter: 50_000,
        ..LocalOptConfig::default()
    };

    c.bench_function("bfgs rosenbrock", |b| {
        b.iter(|| quasi_newton(black_box(&obj), black_box(&x0), &cfg).unwrap())
    });
    c.bench_function("sdm rosenbrock", |b| {
        b.iter(|| steepest_descent(black_box(&obj), black_box(&x0), &cfg).unwrap())
    });
}

fn lj_cluster(c: &mut Criterion) {
    let x = perturbed_icosahedron(0.01, 130);
    let cfg13 = ClusterConfig::reduced(13, x.clone()).unwrap();

    c.bench_function("lj13 energy", |b| {
        b.iter(|| lj_energy(black_box(&cfg13)).unwrap())
    });
    c.bench_function("lj13 gradient", |b| {
        b.iter(|| lj_gradient(black_box(&cfg13)).unwrap())
    });

    let obj = LjPotential::reduced(13);
    let opt_cfg = LocalOptConfig {
        grad_tol: 1e-8,
        max_iter: 50_000,
        ..LocalOptConfig::default()
    };
    let mut group = c.benchmark_group("lj13 relax");
    group.sample_size(20);
    group.bench_function("cg", |b| {
        b.iter(|| conjugate_gradient(black_box(&obj), black_box(&x), &opt_cfg).unwrap())
    });
    group.bench_function("bfgs", |b| {
        b.iter(|| quasi_newton(black_box(&obj), black_box(&x), &opt_cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, quadratic_solvers, rosenbrock_descent, lj_cluster);
criterion_main!(benches);
