use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hmuni_core::graver::{graver_for_unimodular_pair, graver_oracle, sample_graver};
use hmuni_bench::unimodular_pairs;
use hmuni_core::{classify, DesignMatrix, HMPair};

fn bench_graver(c: &mut Criterion) {
    let mut g = c.benchmark_group("graver");
    g.sample_size(10);
    for (name, p) in unimodular_pairs() {
        let a = DesignMatrix::build(&p).matrix;
        g.bench_function(format!("pipeline {name}"), |b| b.iter(|| graver_for_unimodular_pair(black_box(&p)).unwrap()));
        g.bench_function(format!("oracle {name}"), |b| b.iter(|| graver_oracle(black_box(&a)).unwrap()));
    }
    g.finish();
}

fn bench_classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    let cases = [
        ("triangle 333", HMPair::parse("1 2 3", "12 13 23", &[3, 3, 3]).unwrap()),
        ("path 2222", HMPair::parse("1 2 3 4", "12 23 34", &[2, 2, 2, 2]).unwrap()),
        (
            "five vertices",
            HMPair::parse("1 2 3 4 5", "1234 1235 145 245", &[2, 2, 2, 3, 3]).unwrap(),
        ),
    ];
    for (name, p) in cases {
        g.bench_function(name, |b| b.iter(|| classify(black_box(&p)).unwrap()));
    }
    g.finish();
}

fn bench_sample(c: &mut Criterion) {
    let p = HMPair::parse("1 2 3 4", "12 23 34 14", &[2, 2, 2, 2]).unwrap();
    let mut seed = 0u64;
    c.bench_function("sample four-cycle", |b| {
        b.iter(|| {
            seed += 1;
            sample_graver(black_box(&p), seed).unwrap()
        })
    });
}

criterion_group!(benches, bench_graver, bench_classify, bench_sample);
criterion_main!(benches);
