use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ctrw_core::laplace::invert_laplace;
use ctrw_core::{
    convergence_table, phi_plus_laplace, price, survival_corridor_laplace, CorridorQuery, InversionMethod, JumpLaw,
    MarketModel, OptionSpec, PhiTransform, Side,
};

fn reference(s0: f64) -> MarketModel {
    MarketModel::risk_neutral(JumpLaw::new(2.0, 3.0).unwrap(), 0.05, s0).unwrap()
}

fn closed_forms(c: &mut Criterion) {
    let model = reference(1.0);
    let put = OptionSpec::VanillaPut { strike: 1.0 };
    c.bench_function("vanilla_put_price", |b| b.iter(|| price(black_box(&model), black_box(&put)).unwrap()));
    c.bench_function("phi_plus_laplace", |b| {
        b.iter(|| phi_plus_laplace(black_box(&model), 0.7, 0.0, black_box(0.05)).unwrap())
    });
    let q = CorridorQuery::finite(-0.7, 0.7, 0.0, 0.05).unwrap();
    c.bench_function("corridor_laplace", |b| b.iter(|| survival_corridor_laplace(black_box(&model), black_box(&q)).unwrap()));
}

fn convergence(c: &mut Criterion) {
    let grid: Vec<f64> = (0..=65).map(|i| 0.85 + i as f64 * 0.01).collect();
    let rhos = [2.0, 5.0, 20.0, 100.0, 1000.0];
    c.bench_function("convergence_table", |b| b.iter(|| convergence_table(0.05, 0.1, black_box(&rhos), black_box(&grid)).unwrap()));
}

fn inversion(c: &mut Criterion) {
    let model = reference(0.5);
    let f = PhiTransform::new(&model, Side::Up, 0.0, model.x0()).unwrap();
    let mut group = c.benchmark_group("invert_phi_t100");
    for (name, method) in [
        ("stehfest16", InversionMethod::default()),
        ("stehfest_extended24", InversionMethod::extended()),
        ("talbot32", InversionMethod::talbot()),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &method, |b, &m| {
            // Double-precision Stehfest may report instability at t = 100; the
            // cost is the same either way.
            b.iter(|| invert_laplace(black_box(&f), 100.0, m).ok())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_forms, convergence, inversion);
criterion_main!(benches);
