// SPDX-License-Identifier: Apache-2.0

//! Parallel and sequential strategies on the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use delpezzo::catalog::generate_config_table_with;
use delpezzo::dataset::{document, load_document, run_verify, VerifyOptions};
use delpezzo::dynkin::DynkinType;
use delpezzo::embedding::{embedding_classes, enumerate_embeddings_with};
use delpezzo::exec::Strategy;
use delpezzo::lattice::QuadraticSpace;
use delpezzo::singularity::singular_coordinates;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn embeddings(c: &mut Criterion) {
    let mut g = c.benchmark_group("embeddings");
    g.sample_size(10);
    let space = QuadraticSpace::for_degree(1).unwrap();
    let a4: DynkinType = "A4+2A1".parse().unwrap();
    let a3: DynkinType = "A3+2A1".parse().unwrap();
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("enumerate A4+2A1 d=1", name), &s, |b, &s| {
            b.iter(|| enumerate_embeddings_with(&a4, &space, s).unwrap().len())
        });
        g.bench_with_input(BenchmarkId::new("classes A3+2A1 d=1", name), &s, |b, &s| {
            b.iter(|| embedding_classes(&a3, 1, false, s).unwrap().len())
        });
    }
    g.finish();
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("tables");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("char 3 d=1", name), &s, |b, &s| {
            b.iter(|| generate_config_table_with(3, 1, s).unwrap().len())
        });
    }
    g.finish();
}

fn singular_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("singular_sweep");
    g.sample_size(10);
    let records = load_document(&document(3).unwrap()).unwrap();
    let rec = records.iter().find(|r| r.id() == "p3-d1-22").unwrap();
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("p3-d1-22", name), &s, |b, &s| {
            b.iter(|| singular_coordinates(&rec.surface, s).unwrap().len())
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    let records = load_document(&document(5).unwrap()).unwrap();
    for (name, s) in STRATEGIES {
        let opts = VerifyOptions { jobs: 0, strategy: s };
        g.bench_with_input(BenchmarkId::new("char 5", name), &opts, |b, opts| {
            b.iter(|| run_verify(&records, opts).pass)
        });
    }
    g.finish();
}

criterion_group!(benches, embeddings, tables, singular_sweep, verify);
criterion_main!(benches);
