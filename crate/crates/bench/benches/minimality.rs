use criterion::{criterion_group, criterion_main, Criterion};
use jointmin::minimality::{descend_to_minimal, DEFAULT_DESCENT_CAP};
use jointmin::polyhedra::enumerate_vertices;
use jointmin::qubit::{qubit_is_minimal, region_scan, DEFAULT_RANGE};
use jointmin::{is_minimal, Tolerance};
use jointmin_bench::{cube, example_trivial, f1_indep, f1_min, f1_nonmin, marginal_vectors};
use std::hint::black_box;

fn general(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("is_minimal");
    for (name, q) in [("f1_min", f1_min()), ("f1_nonmin", f1_nonmin()), ("f1_indep", f1_indep())] {
        let inst = q.joint_instance(&tol).unwrap();
        group.bench_function(name, |b| b.iter(|| is_minimal(black_box(&inst)).unwrap()));
    }
    let trivial = example_trivial();
    group.bench_function("example_trivial", |b| b.iter(|| is_minimal(black_box(&trivial)).unwrap()));
    group.finish();

    let inst = f1_nonmin().joint_instance(&tol).unwrap();
    c.bench_function("descend/f1_nonmin", |b| {
        b.iter(|| descend_to_minimal(black_box(&inst), DEFAULT_DESCENT_CAP).unwrap())
    });
}

fn closed_form(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("qubit_is_minimal");
    for (name, q) in [("f1_min", f1_min()), ("f1_nonmin", f1_nonmin()), ("f1_indep", f1_indep())] {
        let (a, b, p) = (q.obs_a(), q.obs_b(), q.params());
        group.bench_function(name, |bn| bn.iter(|| qubit_is_minimal(&a, &b, black_box(&p), &tol).unwrap()));
    }
    group.finish();

    let (a, b) = marginal_vectors();
    c.bench_function("region_scan/101", |bn| {
        bn.iter(|| region_scan(&a, &b, black_box(0.5), DEFAULT_RANGE, DEFAULT_RANGE, 101, &tol).unwrap())
    });
}

fn vertices(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("enumerate_vertices");
    for n in [3, 5, 7] {
        let sys = cube(n);
        group.bench_function(format!("cube{n}"), |b| b.iter(|| enumerate_vertices(black_box(&sys), &tol).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, general, closed_form, vertices);
criterion_main!(benches);
