use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use saucer::par::Exec;
use saucer::sampling::Sampler;
use saucer::suites::{run_suite, Context, Suite};
use saucer::symmetry::{catalog_residuals, SymmetryCatalog};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn residual_sweep(c: &mut Criterion) {
    let pts = Sampler::stream(1, "bench").chart_points(64);
    let mut g = c.benchmark_group("catalog_residuals");
    for cat in SymmetryCatalog::ALL {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, cat.name()), &pts, |b, pts| {
                b.iter(|| catalog_residuals(cat, pts, exec))
            });
        }
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for suite in [Suite::Structure, Suite::Planner] {
        for (name, exec) in MODES {
            let mut ctx = Context::new(1);
            ctx.exec = exec;
            g.bench_function(BenchmarkId::new(name, suite.name()), |b| b.iter(|| run_suite(suite, &ctx)));
        }
    }
    g.finish();
}

criterion_group!(benches, residual_sweep, suites);
criterion_main!(benches);
