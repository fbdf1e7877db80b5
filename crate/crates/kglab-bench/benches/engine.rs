//! Benchmarks for the hot paths: exact intersection measures, pair sums
//! over lattice shells, and the dyadic-grid sampling engine.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use kglab::montecarlo::{estimate_limsup_measure, SampleSpec};
use kglab::qia::{measure_sum_bits, pair_sum, BallSequence};
use kglab::rational::{rat, zero};
use kglab::torus::{intersect_measure, Ball};
use kglab::{LatticeMode, LatticeVector};

fn bench_intersect_measure(c: &mut Criterion) {
    let mut group = c.benchmark_group("intersect_measure");
    let b1 = Ball::new(vec![rat(1, 7)], rat(1, 30)).unwrap();
    let b2 = Ball::new(vec![rat(2, 11)], rat(1, 40)).unwrap();
    for (name, q1, q2) in [
        ("parallel_n2", vec![2i64, 4], vec![3, 6]),
        ("nonparallel_n2", vec![5, 3], vec![4, 7]),
        ("nonparallel_n3", vec![5, 3, 2], vec![4, 7, 9]),
    ] {
        let q1 = LatticeVector::new(q1).unwrap();
        let q2 = LatticeVector::new(q2).unwrap();
        group.bench_function(name, |bench| {
            bench.iter(|| {
                black_box(intersect_measure(&q1, &b1, &q2, &b2).unwrap());
            })
        });
    }
    group.finish();
}

fn bench_pair_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair_sum");
    group.sample_size(10);
    let seq = BallSequence::power_log(1, rat(1, 2), rat(1, 1), zero(), vec![zero()]).unwrap();
    for q_max in [16u64, 32, 64] {
        group.bench_with_input(BenchmarkId::from_parameter(q_max), &q_max, |bench, &q| {
            bench.iter(|| {
                black_box(pair_sum(&seq, 1, q, 2, LatticeMode::Full).unwrap());
            })
        });
    }
    group.finish();
}

fn bench_measure_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("measure_sum");
    let seq = BallSequence::power_log(
        1,
        rat(1, 3),
        rat(1, 2),
        rat(1, 3),
        vec![zero()],
    )
    .unwrap();
    for q_max in [64u64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(q_max), &q_max, |bench, &q| {
            bench.iter(|| {
                black_box(measure_sum_bits(&seq, 2, q, LatticeMode::Full, 64));
            })
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("limsup_sampling");
    group.sample_size(10);
    let seq = BallSequence::power(1, rat(1, 4), rat(1, 1)).unwrap();
    for samples in [200u64, 1000] {
        group.bench_with_input(
            BenchmarkId::from_parameter(samples),
            &samples,
            |bench, &samples| {
                bench.iter(|| {
                    let spec = SampleSpec::new(7, samples).unwrap();
                    black_box(
                        estimate_limsup_measure(
                            &seq,
                            1,
                            &[64, 128],
                            &[3],
                            LatticeMode::Full,
                            spec,
                        )
                        .unwrap(),
                    );
                })
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_intersect_measure,
    bench_pair_sum,
    bench_measure_sum,
    bench_sampling
);
criterion_main!(benches);
