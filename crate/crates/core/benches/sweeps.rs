//! Corpus sweeps in both execution modes.
//!
//! Build with `--no-default-features` to see the sequential fallback take
//! over the `parallel` rows as well.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shadowlab::corpus::exhaustive_upto;
use shadowlab::par::ExecMode;
use shadowlab::suites::{run_suite, SuiteConfig, SuiteId};

fn sweeps(c: &mut Criterion) {
    let corpus = exhaustive_upto(4).unwrap();
    let mut group = c.benchmark_group("exhaustive4");
    group.sample_size(10);
    for suite in [SuiteId::Lemmas, SuiteId::T1t2, SuiteId::Prop23] {
        for (name, mode) in [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)] {
            let config = SuiteConfig { mode, ..SuiteConfig::default() };
            group.bench_with_input(BenchmarkId::new(suite.name(), name), &config, |b, config| {
                b.iter(|| run_suite(suite, &corpus, config).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("families");
    group.sample_size(10);
    for (name, mode) in [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)] {
        let config = SuiteConfig { mode, ..SuiteConfig::default() };
        group.bench_function(name, |b| b.iter(|| run_suite(SuiteId::Families, &[], &config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
