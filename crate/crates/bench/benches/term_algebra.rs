use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kanforge::enumerate::enumerate_k_terminal;
use kanforge::free::{pi_value, sigma_value};
use kanforge::path::{path_fibration, path_object};
use kanforge::{run_suite, Bit, GenConfig, Name, Suite, Value};
use kanforge_bench::{boxes, terms, unit_formal, unit_free};

fn term_operations(c: &mut Criterion) {
    let cfg = GenConfig::default();
    let ts = terms(256, 1, &cfg);
    c.bench_function("subst", |b| {
        b.iter(|| {
            for t in &ts {
                black_box(t.subst(Name(0), Bit::One));
            }
        })
    });
    c.bench_function("rank", |b| {
        b.iter(|| ts.iter().map(|t| black_box(t).rank()).sum::<usize>())
    });
    c.bench_function("sigma", |b| {
        b.iter(|| {
            for t in &ts {
                black_box(sigma_value(t));
            }
        })
    });
    let kr = unit_free().over_projection();
    let lifted: Vec<Value> = ts.iter().map(|t| kr.lambda.apply(t)).collect();
    c.bench_function("pi", |b| {
        b.iter(|| {
            for t in &lifted {
                black_box(pi_value(t));
            }
        })
    });
}

fn filling(c: &mut Criterion) {
    let cfg = GenConfig::default();
    let fs = unit_formal();
    let bs = boxes(&fs.morphism, 128, 2, &cfg);
    c.bench_function("formal fill", |b| {
        b.iter(|| {
            for bx in &bs {
                black_box(fs.fill(bx));
            }
        })
    });
    let pf = path_fibration(&path_object(&fs));
    let pbs = boxes(&pf.morphism, 32, 3, &cfg);
    c.bench_function("path fill", |b| {
        b.iter(|| {
            for bx in &pbs {
                black_box(pf.fill(bx));
            }
        })
    });
}

fn whole_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("runs");
    group.sample_size(10);
    group.bench_function("enumerate rank 2 over 2 names", |b| {
        b.iter(|| enumerate_k_terminal(2, 2, 10_000).unwrap())
    });
    group.bench_function("comonad suite, 50 iterations", |b| {
        b.iter(|| run_suite(Suite::Comonad, 7, 50, &GenConfig::default()))
    });
    group.finish();
}

criterion_group!(benches, term_operations, filling, whole_runs);
criterion_main!(benches);
