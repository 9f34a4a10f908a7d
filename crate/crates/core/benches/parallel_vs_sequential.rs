use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gasket_spectra::eigen::full_basis_with;
use gasket_spectra::verify::{run_suite, Suite, SuiteConfig};
use gasket_spectra::{Execution, Family};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn basis_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_basis");
    group.sample_size(10);
    for (family, n) in [(Family::H, 5), (Family::G, 5)] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("{family}_{n}")), &n, |b, &n| {
                b.iter(|| full_basis_with(family, n, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            max_level: 4,
            tolerance: None,
            exec,
        };
        group.bench_function(name, |b| b.iter(|| assert!(run_suite(Suite::Spectrum, &cfg).passed)));
    }
    group.finish();
}

fn similarity_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("similarity_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            max_level: 3,
            tolerance: None,
            exec,
        };
        group.bench_function(name, |b| b.iter(|| assert!(run_suite(Suite::Similarity, &cfg).passed)));
    }
    group.finish();
}

criterion_group!(benches, basis_construction, oracle_runs, similarity_sweeps);
criterion_main!(benches);
