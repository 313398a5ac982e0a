use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coxbuild_bench::{named_systems, pentagon_building};
use coxbuild_core::building::{verify_oracle, GraphProductBuilding, OracleOptions};
use coxbuild_core::davis::{davis_chamber, is_type_pm, vcd_real};

fn davis(c: &mut Criterion) {
    let mut group = c.benchmark_group("davis");
    for (name, m) in named_systems() {
        group.bench_with_input(BenchmarkId::new("chamber", name), &m, |b, m| b.iter(|| davis_chamber(m).unwrap()));
        group.bench_with_input(BenchmarkId::new("vcd", name), &m, |b, m| b.iter(|| vcd_real(m).unwrap()));
        group.bench_with_input(BenchmarkId::new("type_pm", name), &m, |b, m| b.iter(|| is_type_pm(m).unwrap()));
    }
    group.finish();
}

fn buildings(c: &mut Criterion) {
    let spec = pentagon_building();
    let mut group = c.benchmark_group("building");
    group.sample_size(10);
    for radius in [3, 4] {
        group.bench_with_input(BenchmarkId::new("ball", radius), &radius, |b, &r| {
            b.iter(|| GraphProductBuilding::build(&spec, r, 1_000_000).unwrap())
        });
    }
    let opts = OracleOptions { radius: 3, trials: 50, ..OracleOptions::default() };
    group.bench_function("oracle_r3_50", |b| b.iter(|| verify_oracle(&spec, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, davis, buildings);
criterion_main!(benches);
