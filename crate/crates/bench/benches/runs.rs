use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use subelliptic::domain::{default_coeff_set, type_lower_bound, DomainSpec};
use subelliptic::effective::{self, HypoStatus};
use subelliptic::kohn::{self, KohnConfig};
use subelliptic::numcheck;

fn runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("kohn");
    g.sample_size(10);
    for (tau, l, k) in [(3, 2, 4), (4, 3, 6)] {
        let spec = DomainSpec::family(tau, l, k);
        g.bench_function(format!("classic/{tau}-{l}-{k}"), |b| {
            b.iter(|| kohn::run(black_box(&spec), &KohnConfig::default()).unwrap())
        });
        g.bench_function(format!("effective/{tau}-{l}-{k}"), |b| {
            b.iter(|| effective::zeta_chain(black_box(&spec), HypoStatus::Asserted, false).unwrap())
        });
    }
    g.finish();
}

fn numerics(c: &mut Criterion) {
    let spec = DomainSpec::remark(5);
    c.bench_function("sample_hypo/remark/1000", |b| {
        b.iter(|| numcheck::sample_hypo(black_box(&spec), 0.01, 1000, 42).unwrap())
    });
    let points = numcheck::sample_points(0.5, 100, 42);
    c.bench_function("finite_diff_levi/remark/100", |b| {
        b.iter(|| numcheck::finite_diff_levi(&spec, black_box(&points), 1e-4).unwrap())
    });
    let family = DomainSpec::family(3, 2, 5);
    c.bench_function("type_lower_bound/3-2-5", |b| {
        b.iter(|| type_lower_bound(black_box(&family), 8, &default_coeff_set()).unwrap())
    });
}

criterion_group!(benches, runs, numerics);
criterion_main!(benches);
