use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use su2n_core::fdsolver::{assemble_h, Grid, Sign, Stencil};
use su2n_core::multiplets::build_multiplet;
use su2n_core::transforms::{coupled_residual, hankel_at, momentum_spinor, HankelOptions};
use su2n_core::HalfInt;

fn fd(c: &mut Criterion) {
    let mut g = c.benchmark_group("fd lowest 3");
    for n in [512, 4096] {
        let h = assemble_h(HalfInt::HALF, Sign::Minus, Grid::new(n).unwrap(), Stencil::Weighted).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| b.iter(|| h.eigen_lowest(3).unwrap()));
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let j = HalfInt::from_twice(3);
    let m = build_multiplet(j).unwrap();
    let ms = momentum_spinor(m.top(), j, 1.0, 401).unwrap();
    c.bench_function("coupled residual 401 points", |b| b.iter(|| coupled_residual(&ms, 1.0).unwrap()));
    let f = |r: f64| (-r).exp();
    c.bench_function("hankel e^-r at p=3", |b| {
        b.iter(|| hankel_at(&f, 0, 3.0, HankelOptions::default()).unwrap())
    });
}

criterion_group!(benches, fd, transforms);
criterion_main!(benches);
