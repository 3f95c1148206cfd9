use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cohdistill_core::correlations::{tripartite_discord, DiscordConfig};
use cohdistill_core::densmat::eig_hermitian;
use cohdistill_core::distill::{c_cop, tau, AssistedObjective};
use cohdistill_core::states::{make_family, random_density};
use cohdistill_core::{Family, FamilyParam, OptimizerConfig, ProjectiveBasis};

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_hermitian");
    for n in 1..=4 {
        let rho = random_density(n, 1 << n, 3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(1 << n), &rho, |b, rho| {
            b.iter(|| eig_hermitian(black_box(rho.matrix())).unwrap())
        });
    }
    group.finish();
}

fn objective(c: &mut Criterion) {
    let rho = random_density(3, 8, 5).unwrap();
    let obj = AssistedObjective::new(&rho, "A", &[vec!["B", "C"]]).unwrap();
    let basis = ProjectiveBasis::new(0.4, 1.1).unwrap();
    c.bench_function("objective/3-qubit-bc", |b| b.iter(|| obj.evaluate(black_box(&basis)).unwrap()));
}

fn distillation(c: &mut Criterion) {
    let cfg = OptimizerConfig::default();
    let w = make_family(&FamilyParam::new(Family::WType, 0.5)).unwrap();
    let mixed = random_density(3, 4, 11).unwrap();
    c.bench_function("c_cop/w-bc", |b| b.iter(|| c_cop(black_box(&w), "A", &["B", "C"], &cfg).unwrap()));
    c.bench_function("c_cop/mixed-bc", |b| b.iter(|| c_cop(black_box(&mixed), "A", &["B", "C"], &cfg).unwrap()));
    c.bench_function("tau/w", |b| b.iter(|| tau(black_box(&w), "A", "B", "C", &cfg).unwrap()));
}

fn discord(c: &mut Criterion) {
    let w = make_family(&FamilyParam::new(Family::WType, 0.5)).unwrap();
    let cfg = DiscordConfig::default();
    let mut group = c.benchmark_group("discord");
    group.sample_size(10);
    group.bench_function("d3/w", |b| b.iter(|| tripartite_discord(black_box(&w), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, eigensolver, objective, distillation, discord);
criterion_main!(benches);
