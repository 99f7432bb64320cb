use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use superchar::involution_group::{Family, GroupContext, GroupSpec};
use superchar::orbits::{dual_orbits, primal_orbits};
use superchar::par::Exec;
use superchar::sct::{Theory, TheoryOptions};

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::new(Family::UU, 4, 3, 1, 2),
        GroupSpec::new(Family::UU, 5, 3, 1, 2),
        GroupSpec::new(Family::USp, 4, 5, 1, 1),
        GroupSpec::new(Family::UT, 4, 3, 1, 1),
    ]
}

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbits");
    group.sample_size(10);
    for spec in specs() {
        let ctx = GroupContext::new(&spec).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("primal/{name}"), spec.label()), &exec, |b, &e| {
                b.iter(|| black_box(primal_orbits(&ctx, e).len()))
            });
            group.bench_with_input(BenchmarkId::new(format!("dual/{name}"), spec.label()), &exec, |b, &e| {
                b.iter(|| black_box(dual_orbits(&ctx, e).0.len()))
            });
        }
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    for spec in specs() {
        let ctx = Arc::new(GroupContext::new(&spec).unwrap());
        for (name, exec) in MODES {
            let opts = TheoryOptions { exec, ..TheoryOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, spec.label()), &opts, |b, &o| {
                b.iter(|| black_box(Theory::build(ctx.clone(), o).unwrap().tables().unwrap().1.rows.len()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, orbits, tables);
criterion_main!(benches);
