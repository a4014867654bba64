use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use umf_core::cohomwin;
use umf_core::mfcore::search_factorizations;
use umf_core::ringpoly::Exponents;
use umf_core::rp2::{self, Rp2Context};
use umf_core::sample::DEFAULT_SEED;
use umf_core::{Exec, FieldSpec, Ring, RingPoly};

const MODES: [(&str, Exec); 2] = [("serial", Exec::Serial), ("parallel", Exec::Parallel)];

fn search(c: &mut Criterion) {
    let ring = Ring::polynomial(FieldSpec::gf2(), &["x", "y"]).unwrap();
    let w = RingPoly::parse("x^2 + y^2", &ring).unwrap();
    let support: Vec<Exponents> = [[1, 0], [0, 1], [0, 0]]
        .iter()
        .map(|e| Exponents::from_slice(e))
        .collect();
    let mut g = c.benchmark_group("search_size2");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| search_factorizations(black_box(&w), 2, &support, 24, exec).unwrap())
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let ctx = Rp2Context::new(&FieldSpec::gf2()).unwrap();
    let mut g = c.benchmark_group("cohomology_rp2_d6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cohomwin::cohomology_dims(ctx.mf(), ctx.mf(), black_box(6), exec).unwrap())
        });
    }
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let ctx = Rp2Context::new(&FieldSpec::gf2()).unwrap();
    let mut g = c.benchmark_group("reduce_100");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assert_eq!(rp2::reduction_round_trips(&ctx, 100, black_box(DEFAULT_SEED), exec), 0))
        });
    }
    g.finish();
}

criterion_group!(benches, search, cohomology, reduction);
criterion_main!(benches);
