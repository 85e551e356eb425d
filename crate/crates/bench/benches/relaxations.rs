use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use copo_bench::{graph_fixtures, membership_fixtures, sqp_fixture};
use copo_core::apps::{chromatic_bound, sqp_bound, theta_r, Graph};
use copo_core::cones::{build_membership, decide_membership, ConeKind};

fn membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("membership");
    group.sample_size(10);
    for (name, m) in membership_fixtures() {
        for (kind, r) in [(ConeKind::K, 0), (ConeKind::Q, 1), (ConeKind::K, 1)] {
            let problem = build_membership(kind, &m, r).unwrap();
            group.bench_function(BenchmarkId::new(name, format!("{}{}", kind, r)), |b| {
                b.iter(|| decide_membership(&problem, 1e-6))
            });
        }
    }
    group.finish();
}

fn sqp(c: &mut Criterion) {
    let mut group = c.benchmark_group("sqp");
    group.sample_size(10);
    for n in [3, 5, 8] {
        let m = sqp_fixture(n);
        group.bench_with_input(BenchmarkId::new("K0", n), &m, |b, m| {
            b.iter(|| sqp_bound(m, 0, ConeKind::K, 1e-6))
        });
        group.bench_with_input(BenchmarkId::new("Q1", n), &m, |b, m| {
            b.iter(|| sqp_bound(m, 1, ConeKind::Q, 1e-6))
        });
    }
    group.finish();
}

fn graphs(c: &mut Criterion) {
    let mut group = c.benchmark_group("graphs");
    group.sample_size(10);
    for (name, g) in graph_fixtures() {
        group.bench_function(BenchmarkId::new("theta0", name), |b| {
            b.iter(|| theta_r(&g, 0, 1e-6))
        });
    }
    let k3 = Graph::complete(3);
    group.bench_function("chromatic0/k3", |b| {
        b.iter(|| chromatic_bound(&k3, 0, ConeKind::K, 1e-6))
    });
    group.finish();
}

criterion_group!(benches, membership, sqp, graphs);
criterion_main!(benches);
