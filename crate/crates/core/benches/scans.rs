use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use orderlab::folner::defect_trend_with;
use orderlab::order::{count_below_with, verify_admissibility_with, verify_past_axioms_with};
use orderlab::shift::{pattern_count_with, ShiftSystem};
use orderlab::{FiniteWindow, GroupElement, GroupId, OrderedGroupContext, Strategy};

const STRATEGIES: [(&str, Strategy); 2] =
    [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("past_axioms");
    group.sample_size(10);
    for (gid, radius) in [(GroupId::IntegerLattice(2), 4), (GroupId::Heisenberg, 2)] {
        let ctx = OrderedGroupContext::standard(gid).unwrap();
        for (name, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, gid), &radius, |b, &r| {
                b.iter(|| verify_past_axioms_with(&ctx, black_box(r), strategy).unwrap())
            });
        }
    }
    group.finish();
}

fn admissibility(c: &mut Criterion) {
    let mut group = c.benchmark_group("admissibility");
    group.sample_size(10);
    let ctx = OrderedGroupContext::standard(GroupId::Heisenberg).unwrap();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| verify_admissibility_with(&ctx, 3, black_box(2), strategy).unwrap())
        });
    }
    group.finish();
}

fn counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_below");
    group.sample_size(10);
    let ctx = OrderedGroupContext::standard(GroupId::Heisenberg).unwrap();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| count_below_with(&ctx, black_box(5), strategy).unwrap()));
    }
    group.finish();
}

fn defects(c: &mut Criterion) {
    let mut group = c.benchmark_group("defect_trend");
    group.sample_size(10);
    let t2 = GroupElement::generator(GroupId::Heisenberg, "T2").unwrap();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| defect_trend_with(GroupId::Heisenberg, &t2, 2, black_box(10), 0.2, strategy).unwrap())
        });
    }
    group.finish();
}

fn patterns(c: &mut Criterion) {
    let mut group = c.benchmark_group("hard_squares");
    group.sample_size(10);
    let sys = ShiftSystem::from_sft_text("alphabet 2\ngroup zd:2\n0,0:1 1,0:1\n0,0:1 0,1:1\n").unwrap();
    let window = FiniteWindow::lattice_rectangle(GroupId::IntegerLattice(2), &[0, 0], &[11, 11]).unwrap();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| pattern_count_with(&sys, black_box(&window), strategy).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, axioms, admissibility, counts, defects, patterns);
criterion_main!(benches);
