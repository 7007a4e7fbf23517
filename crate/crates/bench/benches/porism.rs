use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use porism_core::centers::CenterId;
use porism_core::chain::chain_at_with;
use porism_core::invariants::{half_tangent_reports, SignRule};
use porism_core::locus::{classify_sweep, sweep_center};
use porism_core::porism::fit_outer_conic;
use porism_core::verify::{verify_only, Suite};
use porism_core::{PorismConfig, ToleranceSet};
use std::hint::black_box;

fn chain(c: &mut Criterion) {
    let tol = ToleranceSet::default();
    let mut g = c.benchmark_group("chain_at");
    for n in [3usize, 8] {
        let cfg = PorismConfig::new(n, 1.0, 0.1, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &cfg, |b, cfg| {
            b.iter(|| chain_at_with(cfg, black_box(0.37), &tol).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let tol = ToleranceSet::default();
    let cfg = PorismConfig::new(5, 1.0, 0.3, 1.0).unwrap();
    c.bench_function("half_tangent_sweep_n5_360", |b| {
        b.iter(|| half_tangent_reports(black_box(&cfg), 360, SignRule::DistalVertex, &tol).unwrap())
    });
}

fn fits(c: &mut Criterion) {
    let tol = ToleranceSet::default();
    let cfg = PorismConfig::new(3, 1.0, 0.1, 1.0).unwrap();
    c.bench_function("fit_outer_conic_90", |b| b.iter(|| fit_outer_conic(black_box(&cfg), 90, &tol).unwrap()));
    let x4 = CenterId::new(4).unwrap();
    c.bench_function("classify_x4_locus_360", |b| {
        b.iter(|| classify_sweep(&sweep_center(black_box(&cfg), x4, 360, &tol).unwrap(), &tol).unwrap())
    });
}

fn verify(c: &mut Criterion) {
    let suite = Suite::default_suite();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("descartes_tau_eversion", |b| {
        b.iter(|| verify_only(black_box(&suite), &["descartes", "tau_trichotomy", "eversion"]).unwrap())
    });
    g.finish();
}

criterion_group!(benches, chain, sweep, fits, verify);
criterion_main!(benches);
