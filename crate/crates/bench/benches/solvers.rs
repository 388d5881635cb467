use criterion::{black_box, criterion_group, criterion_main, Criterion};
use magspec_core::eigensolve::{self, SolverOptions};
use magspec_core::geometry::DomainSpec;
use magspec_core::{closedform, fem, mesh};

fn assembly(c: &mut Criterion) {
    let m = mesh::generate(&DomainSpec::disk(1.0), 0.03).unwrap();
    let a = fem::standard_potential(2.0);
    c.bench_function("assemble_disk_h0.03", |b| b.iter(|| fem::assemble_magnetic(black_box(&m), &a)));
    c.bench_function("mesh_ellipse_h0.03", |b| {
        b.iter(|| mesh::generate(black_box(&DomainSpec::ellipse(1.0, 0.5)), 0.03).unwrap())
    });
}

fn eigensolve(c: &mut Criterion) {
    let m = mesh::generate(&DomainSpec::disk(1.0), 0.04).unwrap();
    let sys = fem::assemble_magnetic(&m, &fem::standard_potential(2.0));
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("eigensolve");
    g.sample_size(10);
    for k in [1, 10] {
        g.bench_function(format!("disk_h0.04_k{k}"), |b| b.iter(|| eigensolve::smallest(black_box(&sys), k, &opts).unwrap()));
    }
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("closedform");
    g.sample_size(10);
    g.bench_function("disk_R2_k50", |b| b.iter(|| closedform::disk_spectrum(black_box(2.0), 1.0, 50).unwrap()));
    g.bench_function("theta0", |b| b.iter(|| closedform::theta0(black_box(1e-5)).unwrap()));
    g.finish();
}

criterion_group!(benches, assembly, eigensolve, closed_forms);
criterion_main!(benches);
