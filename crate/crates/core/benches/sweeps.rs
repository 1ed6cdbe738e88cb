use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use riesz_core::suite::{self, AuditOptions, Corpus};
use riesz_core::Execution;

fn corpus(name: &str) -> Corpus {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora").join(name);
    Corpus::load(&path).expect("shipped corpus loads")
}

fn audits(c: &mut Criterion) {
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    for name in ["finite-exhaustive.json", "sequence.json", "default.json"] {
        let corpus = corpus(name);
        for (label, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let options = AuditOptions {
                execution,
                ..AuditOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(label, name), &options, |b, options| {
                b.iter(|| black_box(suite::run_audit(&corpus, options).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, audits);
criterion_main!(benches);
