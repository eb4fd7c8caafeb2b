use criterion::{criterion_group, criterion_main, Criterion};
use k3kummer_core::classifier::{classify, sublattice_from_subspace, TableCatalog};
use k3kummer_core::discform::{discriminant_form, kq_det};
use k3kummer_core::f2space::{enumerate_subspaces, orthogonal_group};
use k3kummer_core::kummer::build_sy;
use std::hint::black_box;

fn bench_classification(c: &mut Criterion) {
    let cat = TableCatalog::load().unwrap();
    let mut g = c.benchmark_group("classification");
    g.sample_size(10);
    g.bench_function("classify", |b| b.iter(|| classify(black_box(&cat)).unwrap()));
    g.finish();
}

fn bench_orthogonal_group(c: &mut Criterion) {
    c.bench_function("orthogonal_group", |b| b.iter(orthogonal_group));
}

fn bench_discriminant_form(c: &mut Criterion) {
    let subs = enumerate_subspaces();
    let lattices: Vec<_> = subs.iter().take(31).map(sublattice_from_subspace).collect();
    c.bench_function("discriminant_form", |b| {
        b.iter(|| {
            for l in &lattices {
                black_box(discriminant_form(l).unwrap());
            }
        })
    });
}

fn bench_kq_det(c: &mut Criterion) {
    let forms: Vec<_> = enumerate_subspaces()
        .iter()
        .take(31)
        .map(|s| discriminant_form(&sublattice_from_subspace(s)).unwrap())
        .collect();
    c.bench_function("kq_det", |b| {
        b.iter(|| {
            for q in &forms {
                black_box(kq_det(q, 2).unwrap());
            }
        })
    });
}

fn bench_twist_check(c: &mut Criterion) {
    let ns = build_sy().unwrap();
    let mut g = c.benchmark_group("twist");
    g.sample_size(10);
    g.bench_function("twist_check", |b| b.iter(|| ns.twist_check().unwrap()));
    g.finish();
}

criterion_group!(
    benches,
    bench_classification,
    bench_orthogonal_group,
    bench_discriminant_form,
    bench_kq_det,
    bench_twist_check
);
criterion_main!(benches);
