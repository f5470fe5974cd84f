use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sosggm::boundary_law::BoundaryLaw;
use sosggm::exec::Execution;
use sosggm::ggm::{build_ball, observed_marginal_with, Mode, Pinning};
use sosggm::periodic::{self, search_periodic_numeric_with};
use sosggm::scan::{self, ScanFamily};
use sosggm::Params;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn tau_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau_scan");
    g.sample_size(10);
    let families = [ScanFamily::Q3Mirror, ScanFamily::Q4Mirror, ScanFamily::Q5Mirror];
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("k2_q3-5_mirror", name), |b| {
            b.iter(|| scan::scan(2, black_box(&families), 3.0, 10.0, 200, exec).unwrap())
        });
    }
    g.finish();
}

fn numeric_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("numeric_search");
    g.sample_size(10);
    let params = Params::new(3, 6.0).unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("k3_q5_grid80", name), |b| {
            b.iter(|| search_periodic_numeric_with(black_box(&params), 5, 80, exec))
        });
    }
    g.finish();
}

fn truncated_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("ggm_truncated");
    g.sample_size(10);
    let params = Params::new(2, 5.0).unwrap();
    let sols = periodic::solve_q4_mirror(&params).unwrap();
    let law = BoundaryLaw::from_word(&sols[0]);
    let ball = build_ball(2, 0).unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("radius0_trunc12", name), |b| {
            b.iter(|| {
                observed_marginal_with(&ball, &law, Pinning::Mixed, Mode::Truncated(12), 0, exec).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, tau_scan, numeric_search, truncated_table);
criterion_main!(benches);
