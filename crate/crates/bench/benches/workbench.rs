use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use symx_core::forcing::check_symmetry_lemma;
use symx_core::sexpr;
use symx_core::suites::{run_suite, RunConfig};
use symx_core::{Engine, GroupDesc, IndexDomain, TruncatedPoset};

fn engine_forces(c: &mut Criterion) {
    let t = TruncatedPoset::plain(3, 2).unwrap();
    let p = sexpr::parse_condition("(cond ((n:0 0) 1))").unwrap();
    let phi = sexpr::parse_formula("(elem (check 0) (gen n:0))").unwrap();
    c.bench_function("engine forces 3x2", |b| {
        b.iter(|| {
            Engine::new(&t)
                .forces(black_box(&p), black_box(&phi))
                .unwrap()
        })
    });
}

fn symmetry_lemma(c: &mut Criterion) {
    let t = TruncatedPoset::plain(2, 1).unwrap();
    let group = GroupDesc::FullGroup(IndexDomain::Plain(None));
    c.bench_function("symmetry lemma 2x1 depth 1", |b| {
        b.iter(|| check_symmetry_lemma(&t, &group, 1, 1, 100_000_000).unwrap())
    });
}

fn find_auto(c: &mut Criterion) {
    let mut cfg = RunConfig::new("find-auto");
    cfg.cases = 100;
    c.bench_function("find-auto 100 specs", |b| {
        b.iter(|| run_suite(black_box(&cfg)).unwrap())
    });
}

fn parse_and_apply(c: &mut Criterion) {
    let pi = sexpr::parse_automorphism("(perm (0 1) (1 0))").unwrap();
    let name = sexpr::parse_name("(bullet (gen n:0) (opair (gen n:1) (check 2)))").unwrap();
    c.bench_function("apply swap", |b| {
        b.iter(|| black_box(&name).apply(&pi).unwrap())
    });
}

criterion_group!(
    benches,
    engine_forces,
    symmetry_lemma,
    find_auto,
    parse_and_apply
);
criterion_main!(benches);
