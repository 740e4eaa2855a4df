use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use endoq_bench::{problem, reversed_queue};
use endoq_core::games::{private_requeueing_game, public_requeueing_game, queueing_cost_game};
use endoq_core::solutions::{classify_regimes, core_nonempty};
use endoq_core::RearrangementVariant;

fn queueing(c: &mut Criterion) {
    let mut g = c.benchmark_group("queueing_cost_game");
    for n in [4, 8, 12] {
        let p = problem(n, 20);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| queueing_cost_game(black_box(p))));
    }
    g.finish();
}

fn requeueing(c: &mut Criterion) {
    let mut g = c.benchmark_group("requeueing");
    g.sample_size(10);
    for n in [4, 6] {
        let rq = reversed_queue(n, 15, 1);
        g.bench_with_input(BenchmarkId::new("private", n), &rq, |b, rq| {
            b.iter(|| private_requeueing_game(black_box(rq), RearrangementVariant::Swaps))
        });
        g.bench_with_input(BenchmarkId::new("public", n), &rq, |b, rq| {
            b.iter(|| public_requeueing_game(black_box(rq), RearrangementVariant::Swaps))
        });
    }
    g.finish();
}

fn core_solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("core_nonempty");
    for n in [4, 6, 8] {
        let game = queueing_cost_game(&problem(n, 20)).expect("small");
        g.bench_with_input(BenchmarkId::from_parameter(n), &game, |b, game| b.iter(|| core_nonempty(black_box(game))));
    }
    g.finish();
}

fn regimes(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_regimes");
    g.sample_size(10);
    let p = problem(5, 0);
    g.bench_function("n=5", |b| b.iter(|| classify_regimes(black_box(&p))));
    g.finish();
}

criterion_group!(benches, queueing, requeueing, core_solver, regimes);
criterion_main!(benches);
