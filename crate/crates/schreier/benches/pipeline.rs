//! Parallel vs sequential timings for the rewriting pipeline.
//!
//! The conjugate-relator rewrites are data parallel, so the interesting
//! comparison is the same work item with worker threads on and off. On a
//! single-core host the two arms should time alike; the benches exist to
//! show the split is real and order-preserving, not to promise speedups.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use schreier::catalog::{build_family, recipe, verify_all, FamilySpec, RecipeId, VerifyOptions};
use schreier::rewrite::{subgroup_presentation, RewriteOptions};
use schreier::Family;

fn rewrite_options(parallel: bool) -> RewriteOptions {
    RewriteOptions { parallel, ..RewriteOptions::default() }
}

fn bench_subgroup_rewrites(c: &mut Criterion) {
    let mut group = c.benchmark_group("subgroup_presentation");
    let cases = [(RecipeId::Mt, vec![3i64, 3]), (RecipeId::Torus, vec![3, 3])];
    for (id, params) in cases {
        let r = recipe(id, &params).expect("grid recipe");
        for parallel in [false, true] {
            let arm = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(
                BenchmarkId::new(arm, &r.label),
                &(&r.ambient, &r.generators),
                |b, (p, gens)| {
                    b.iter(|| {
                        subgroup_presentation(p, gens, rewrite_options(parallel)).expect("pipeline")
                    })
                },
            );
        }
    }
    group.finish();
}

fn bench_grid_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(20);
    for parallel in [false, true] {
        let arm = if parallel { "parallel" } else { "sequential" };
        let options = VerifyOptions { parallel, ..VerifyOptions::default() };
        group.bench_function(arm, |b| {
            b.iter(|| {
                let results = verify_all(&options);
                assert!(results.iter().all(|(_, r)| r.as_ref().is_ok_and(|rep| rep.verified)));
                results
            })
        });
    }
    group.finish();
}

fn bench_deepest_enumeration(c: &mut Criterion) {
    // The widest single table on the grid: index 9 with 9 conjugated
    // commutator relators.
    let p = build_family(&FamilySpec::new(Family::TorusKnot, vec![3, 3])).expect("family");
    let r = recipe(RecipeId::Torus, &[3, 3]).expect("recipe");
    c.bench_function("todd_coxeter/torus_3_3", |b| {
        b.iter(|| {
            schreier::coset::todd_coxeter(&p, &r.generators, 100_000).expect("enumeration")
        })
    });
}

criterion_group!(
    benches,
    bench_subgroup_rewrites,
    bench_grid_verification,
    bench_deepest_enumeration
);
criterion_main!(benches);
