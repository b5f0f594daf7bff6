use std::fs;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use mythforge_bench::{build, fixture_config, fixtures_dir, synthetic_records};
use mythforge_core::export::{export_catalog, export_storytelling};
use mythforge_core::graph::{parse_nquads, serialize_nquads, serialize_trig};
use mythforge_core::query::{evaluate, parse_query};

const SIZES: [usize; 3] = [10, 100, 1000];

fn bench_build(c: &mut Criterion) {
    let config = fixture_config();
    let mut group = c.benchmark_group("build");
    for n in SIZES {
        let records = synthetic_records(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &records, |b, r| {
            b.iter(|| build(&config, black_box(r)))
        });
    }
    group.finish();
}

fn bench_serialize(c: &mut Criterion) {
    let config = fixture_config();
    let d = build(&config, &synthetic_records(1000));
    let nq = serialize_nquads(&d);
    let mut group = c.benchmark_group("serialize");
    group.throughput(Throughput::Elements(d.len() as u64));
    group.bench_function("nquads", |b| b.iter(|| serialize_nquads(black_box(&d))));
    group.bench_function("trig", |b| b.iter(|| serialize_trig(black_box(&d))));
    group.bench_function("parse-nquads", |b| b.iter(|| parse_nquads(black_box(&nq)).unwrap()));
    group.finish();
}

fn bench_query(c: &mut Criterion) {
    let config = fixture_config();
    let text = fs::read_to_string(fixtures_dir().join("didone-sources.rq")).unwrap();
    let query = parse_query(&text).unwrap();
    let mut group = c.benchmark_group("query");
    for n in SIZES {
        let d = build(&config, &synthetic_records(n));
        group.bench_with_input(BenchmarkId::new("didone-sources", n), &d, |b, d| {
            b.iter(|| evaluate(black_box(&query), d))
        });
    }
    group.finish();
}

fn bench_export(c: &mut Criterion) {
    let config = fixture_config();
    let base = config.base();
    let mut group = c.benchmark_group("export");
    for n in SIZES {
        let d = build(&config, &synthetic_records(n));
        group.bench_with_input(BenchmarkId::new("catalog", n), &d, |b, d| {
            b.iter(|| export_catalog(black_box(d), &base))
        });
        group.bench_with_input(BenchmarkId::new("storytelling", n), &d, |b, d| {
            b.iter(|| export_storytelling(black_box(d), &base, "virgil-aeneis", 50).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_build, bench_serialize, bench_query, bench_export);
criterion_main!(benches);
