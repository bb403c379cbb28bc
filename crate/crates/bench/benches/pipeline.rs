use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ssgraph_bench::{graph, CASES};
use ssgraph_core::spectral::DEFAULT_TOLERANCE;
use ssgraph_core::{adjacency_spectrum, build_isogeny_graph, enumerate_supersingular, ihara_zeta, reciprocity_check};

fn label(&(p, l, n): &(u64, u64, u64)) -> String {
    format!("p{p}_l{l}_N{n}")
}

fn classes(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_supersingular");
    for p in [37u64, 97] {
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| enumerate_supersingular(p, 0).unwrap())
        });
    }
    g.finish();
}

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_isogeny_graph");
    g.sample_size(10);
    for case in CASES {
        g.bench_with_input(BenchmarkId::from_parameter(label(case)), case, |b, &(p, l, n)| {
            b.iter(|| build_isogeny_graph(p, l, n, 0).unwrap())
        });
    }
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("adjacency_spectrum");
    for case in CASES {
        let gr = graph(case.0, case.1, case.2);
        g.bench_with_input(BenchmarkId::from_parameter(label(case)), &gr, |b, gr| {
            b.iter(|| adjacency_spectrum(gr, DEFAULT_TOLERANCE).unwrap())
        });
    }
    g.finish();
}

fn zeta(c: &mut Criterion) {
    let mut g = c.benchmark_group("ihara_zeta");
    for case in CASES {
        let gr = graph(case.0, case.1, case.2);
        g.bench_with_input(BenchmarkId::from_parameter(label(case)), &gr, |b, gr| b.iter(|| ihara_zeta(gr)));
    }
    g.finish();
}

fn reciprocity(c: &mut Criterion) {
    let mut g = c.benchmark_group("reciprocity_check");
    g.sample_size(10);
    g.bench_function("13_37_5", |b| b.iter(|| reciprocity_check(13, 37, 5, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, classes, construction, spectra, zeta, reciprocity);
criterion_main!(benches);
