use std::hint::black_box;

use bergman::integrate::{cauchy_integral, inner_product_halfspace};
use bergman::{
    bergman_ball_unit, bergman_halfspace, make_test_function, Dim, Element, QuadratureSpec, TestFunction,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn point(dim: Dim, c: &[f64]) -> Element {
    Element::from_prefix(dim, &c[..c.len().min(dim.get())]).unwrap()
}

fn algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for dim in Dim::ALL {
        let x = point(dim, &[0.3, -1.2, 0.7, 0.1, 2.0, -0.4, 0.9, 1.1]);
        let y = point(dim, &[1.5, 0.2, -0.8, 0.6, -1.0, 0.3, 0.05, -0.7]);
        group.bench_with_input(BenchmarkId::from_parameter(dim.get()), &(x, y), |b, (x, y)| {
            b.iter(|| black_box(*x) * black_box(*y))
        });
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("halfspace_kernel");
    for dim in Dim::ALL {
        let x = point(dim, &[0.5, 0.2, 0.1, -0.3, 0.0, 0.4, -0.1, 0.2]);
        let a = point(dim, &[1.5, -0.3, 0.2, 0.1, 0.3, -0.2, 0.0, 0.1]);
        group.bench_with_input(BenchmarkId::from_parameter(dim.get()), &(x, a), |b, (x, a)| {
            b.iter(|| bergman_halfspace(black_box(x), black_box(a)).unwrap())
        });
    }
    group.finish();

    let x = point(Dim::Octonion, &[0.5, 0.1, -0.2]);
    let a = point(Dim::Octonion, &[0.2, 0.0, 0.3, 0.1]);
    c.bench_function("ball_kernel/8", |b| {
        b.iter(|| bergman_ball_unit(black_box(&x), black_box(&a)).unwrap())
    });
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    group.sample_size(10);

    let dim = Dim::Octonion;
    let a = Element::one(dim);
    let f = make_test_function(TestFunction::ShiftedCauchy(Element::real(dim, -1.0))).unwrap();
    let kernel = make_test_function(TestFunction::HalfspaceKernel(a)).unwrap();
    let spec = QuadratureSpec::monte_carlo(65_536, 1).with_focus(a, 1.0);
    group.bench_function("reproduce_halfspace/8/65536", |b| {
        b.iter(|| inner_product_halfspace(&f, &kernel, &spec).unwrap())
    });

    let center = Element::real(dim, 2.0);
    let x = point(dim, &[2.2, 0.1]);
    group.bench_function("cauchy_integral/8/65536", |b| {
        b.iter(|| cauchy_integral(&f, &center, 1.0, &x, &spec).unwrap())
    });
    group.finish();
}

criterion_group!(benches, algebra, kernels, quadrature);
criterion_main!(benches);
