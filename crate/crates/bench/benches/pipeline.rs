use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ernkit::extend::{build_ern, extract_tn, ErnConfig, TnEdgeMode};
use ernkit::metrics::{clustering, path_metrics, PathMode};
use ernkit::powerlaw::{sample_discrete_powerlaw, select_xmin};
use ernkit::synth::{gen_ba, scenario_generate, OsnModel, ScenarioSpec, SeederCount};

fn paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_metrics");
    group.sample_size(10);
    for n in [1_000usize, 5_000] {
        let g = gen_ba(n, 3, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", n), &g, |b, g| {
            b.iter(|| path_metrics(g, PathMode::Exact).unwrap())
        });
    }
    let g = gen_ba(50_000, 3, 1).unwrap();
    group.bench_function("sampled_50k_100", |b| {
        b.iter(|| path_metrics(&g, PathMode::Sampled { sources: 100, seed: 1 }).unwrap())
    });
    group.finish();
}

fn cc(c: &mut Criterion) {
    let g = gen_ba(50_000, 3, 2).unwrap();
    c.bench_function("clustering_ba_50k", |b| b.iter(|| clustering(black_box(&g))));
}

fn fit(c: &mut Criterion) {
    let xs = sample_discrete_powerlaw(2.5, 1, 50_000, 3).unwrap();
    c.bench_function("select_xmin_50k", |b| b.iter(|| select_xmin(black_box(&xs)).unwrap()));
}

fn extend(c: &mut Criterion) {
    let spec = ScenarioSpec {
        osn_model: OsnModel::Ba { n: 20_000, m: 3 },
        seeders: SeederCount::Count(150),
        ..ScenarioSpec::default()
    };
    let s = scenario_generate(&spec).unwrap();
    let seeds = s.seeder_map.osn_seeds();
    let mut group = c.benchmark_group("extend");
    group.sample_size(10);
    group.bench_function("extract_tn", |b| b.iter(|| extract_tn(&s.osn, &seeds, TnEdgeMode::Path).unwrap()));
    let matrix = extract_tn(&s.osn, &seeds, TnEdgeMode::Path)
        .unwrap()
        .matrix
        .relabel(&s.seeder_map.osn_to_rn());
    for k in [1i64, 3, 5] {
        group.bench_with_input(BenchmarkId::new("build_ern", k), &k, |b, &k| {
            b.iter(|| build_ern(&s.rn, &matrix, ErnConfig::new(k, 1).unwrap()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, paths, cc, fit, extend);
criterion_main!(benches);
