use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use firebreak_core::analysis::{cheeger_exact_small, SubsetFamily};
use firebreak_core::graph::{ball, DEFAULT_VERTEX_CAP};
use firebreak_core::groups::{GraphSpec, RegularTree};
use firebreak_core::strategies::{exhaustive_no_containment, ExhaustiveConfig, GreedyFrontier};
use firebreak_core::{play, BudgetSchedule, FiniteGraph, GraphProvider};

fn balls(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball");
    for (spec, r) in [
        (GraphSpec::Grid { dim: 3 }, 20),
        (GraphSpec::Heisenberg { generators: None }, 10),
        (GraphSpec::Lamplighter { generators: None }, 12),
        (GraphSpec::Grigorchuk { generators: None }, 10),
    ] {
        let g = spec.build().unwrap();
        group.bench_with_input(BenchmarkId::new(g.name(), r), &r, |b, &r| {
            b.iter(|| {
                ball(&*g, &[g.basepoint()], black_box(r), DEFAULT_VERTEX_CAP)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

fn games(c: &mut Criterion) {
    let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
    c.bench_function("greedy Z^2 C=2 horizon 40", |b| {
        b.iter(|| {
            let mut s = GreedyFrontier::default();
            play(
                &*g,
                &[g.basepoint()],
                BudgetSchedule::constant(2),
                &mut s,
                black_box(40),
            )
            .unwrap()
        })
    });
}

fn exhaustive(c: &mut Criterion) {
    let tree = RegularTree::new(3).unwrap();
    c.bench_function("exhaustive tree C=1 R=4", |b| {
        b.iter(|| {
            exhaustive_no_containment(
                &tree,
                &[tree.basepoint()],
                BudgetSchedule::constant(1),
                &ExhaustiveConfig::new(4, 4),
            )
            .unwrap()
        })
    });
}

fn cheeger(c: &mut Criterion) {
    let mut group = c.benchmark_group("cheeger exact");
    for n in [12, 16, 20] {
        let g = FiniteGraph::cycle(n);
        group.bench_with_input(BenchmarkId::new("cycle", n), &g, |b, g| {
            b.iter(|| {
                cheeger_exact_small(g, SubsetFamily::HalfOrLess, 20)
                    .unwrap()
                    .best_ratio
            })
        });
    }
    group.finish();
}

criterion_group!(benches, balls, games, exhaustive, cheeger);
criterion_main!(benches);
