use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use subelliptic::domain::DomainSpec;
use subelliptic::localideal::{min_algebraic_radical_order, standard_basis};
use subelliptic::parse_poly;

fn bases(c: &mut Criterion) {
    let gens: Vec<_> = ["3*w^2 + 2*z^5*w", "6*w + 2*z^5"].iter().map(|s| parse_poly(s).unwrap()).collect();
    c.bench_function("standard_basis/two_generators", |b| b.iter(|| standard_basis(black_box(&gens)).unwrap()));

    let ideal = standard_basis(&[
        parse_poly("w").unwrap(),
        parse_poly("wb").unwrap(),
        parse_poly("z^5 + zb^5").unwrap(),
        parse_poly("z^5 - zb^5").unwrap(),
    ])
    .unwrap();
    let z = parse_poly("z").unwrap();
    c.bench_function("radical_floor/z", |b| b.iter(|| min_algebraic_radical_order(black_box(&z), &ideal, 8).unwrap()));
}

fn levi(c: &mut Criterion) {
    for spec in [DomainSpec::family(3, 2, 5), DomainSpec::remark(5)] {
        c.bench_function(&format!("levi_data/{}", spec.name), |b| b.iter(|| black_box(&spec).levi_data().unwrap()));
    }
}

criterion_group!(benches, bases, levi);
criterion_main!(benches);
