use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parashift_core::{
    aitken_limit, classify_shift, iterate, HalfPlanePoint, HistogramPiece, ParabolicMap, RealMeasure, TailSide,
};

fn maps() -> Vec<(&'static str, ParabolicMap)> {
    let atoms = RealMeasure::from_atoms(&[(-3.0, 0.5), (0.0, 1.0), (2.0, 1.5), (4.5, 0.25)]).unwrap();
    let piece = RealMeasure::new(
        vec![],
        vec![HistogramPiece {
            a: -1.0,
            b: 2.0,
            height: 0.5,
        }],
        vec![],
    )
    .unwrap();
    let tail = RealMeasure::single_tail(TailSide::Positive, 1.0, 1.0, 2.5).unwrap();
    vec![
        ("atoms", ParabolicMap::new(1.0, atoms).unwrap()),
        ("piece", ParabolicMap::new(0.5, piece).unwrap()),
        ("tail", ParabolicMap::new(0.0, tail).unwrap()),
    ]
}

fn evaluation(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    let points = [
        HalfPlanePoint::i(),
        HalfPlanePoint::new(-40.0, 12.0).unwrap(),
        HalfPlanePoint::new(3.0, 0.05).unwrap(),
    ];
    for (name, f) in maps() {
        g.bench_function(name, |b| {
            b.iter(|| {
                for z in points {
                    black_box(f.evaluate(black_box(z)).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn orbits(c: &mut Criterion) {
    let mut g = c.benchmark_group("iterate");
    g.sample_size(10);
    for (name, f) in maps() {
        g.bench_with_input(BenchmarkId::new(name, 10_000), &f, |b, f| {
            b.iter(|| iterate(f, HalfPlanePoint::i(), 10_000).unwrap())
        });
    }
    g.finish();
}

fn analysis(c: &mut Criterion) {
    let (_, f) = maps().remove(0);
    c.bench_function("classify", |b| b.iter(|| classify_shift(black_box(&f))));
    let orbit = iterate(&f, HalfPlanePoint::i(), 100_000).unwrap();
    let dx: Vec<f64> = orbit.xs().windows(2).map(|w| w[1] - w[0]).collect();
    c.bench_function("aitken 1e5", |b| b.iter(|| aitken_limit(black_box(&dx))));
}

criterion_group!(benches, evaluation, orbits, analysis);
criterion_main!(benches);
