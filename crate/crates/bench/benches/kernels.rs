use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use berlab::{
    basis_projection, berezin_number, gen_operator, numerical_radius, InstanceSpec, OperatorKind,
    SearchConfig, SpaceModel,
};

fn bench_herm_eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("herm_eig");
    for dim in [8usize, 16, 32] {
        let m = gen_operator(&InstanceSpec::new(1, dim, OperatorKind::Hermitian)).unwrap();
        group.bench_function(format!("dim{dim}"), |b| {
            b.iter(|| black_box(&m).herm_eig().unwrap())
        });
    }
    group.finish();
}

fn bench_berezin_number(c: &mut Criterion) {
    let mut group = c.benchmark_group("berezin_number");
    group.sample_size(20);
    let cfg = SearchConfig::default();
    for dim in [16usize, 64] {
        let space = SpaceModel::hardy(dim).unwrap();
        let op = basis_projection(dim, 1);
        group.bench_function(format!("hardy{dim}"), |b| {
            b.iter(|| berezin_number(black_box(&op), &space, &cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_numerical_radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerical_radius");
    group.sample_size(20);
    for dim in [8usize, 16] {
        let m = gen_operator(&InstanceSpec::new(2, dim, OperatorKind::General)).unwrap();
        group.bench_function(format!("dim{dim}"), |b| {
            b.iter(|| numerical_radius(black_box(&m), 360, 40).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_herm_eig,
    bench_berezin_number,
    bench_numerical_radius
);
criterion_main!(benches);
