use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use clusterint::bfz::{build_bfz, choose_integrable_system_bfz, DoubleWord};
use clusterint::dualgl::{build_dual_chart, build_staircase, lows_via_chart};
use clusterint::exec::{Exec, Settings};
use clusterint::schubert::{build_cell, choose_integrable_system};
use clusterint::typea::WeylElt;

fn modes() -> [(&'static str, Settings); 2] {
    let par = Settings { exec: Exec::Parallel, ..Settings::default() };
    [("sequential", par.sequential()), ("parallel", par)]
}

fn schubert_s5(c: &mut Criterion) {
    let cells: Vec<_> = WeylElt::all(5)
        .into_iter()
        .filter(|w| w.length() >= 8)
        .map(|w| build_cell(5, &w.reduced_word()).unwrap())
        .collect();
    let mut g = c.benchmark_group("schubert_selection_s5");
    g.sample_size(10);
    for (name, st) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                cells.iter().map(|cell| choose_integrable_system(cell, &st).unwrap().independent_count).sum::<usize>()
            })
        });
    }
    g.finish();
}

fn bfz_rank_three(c: &mut Criterion) {
    let mut g = c.benchmark_group("bfz_n3_build_and_select");
    g.sample_size(10);
    for (name, st) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let cl = build_bfz(3, &DoubleWord::staircase(3), 3, &st).unwrap();
                choose_integrable_system_bfz(&cl, &st).unwrap().independent_count
            })
        });
    }
    g.finish();
}

fn dualgl_lows(c: &mut Criterion) {
    let chart = build_dual_chart(4).unwrap();
    let s = build_staircase(&chart);
    let mut g = c.benchmark_group("dualgl_n4_lows");
    g.sample_size(10);
    for (name, st) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| lows_via_chart(&chart, &s, &st).unwrap().len())
        });
    }
    g.finish();
}

criterion_group!(benches, schubert_s5, bfz_rank_three, dualgl_lows);
criterion_main!(benches);
