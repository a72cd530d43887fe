use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mhk_bench::{group, groups};
use mhk_core::catalog::{enumerate_specs, mk_family, parse_spec, OrderBound};
use mhk_core::numtheory::unit_order;
use mhk_core::predicates::{a_index_by_pairs, is_metahamiltonian_def, is_metahamiltonian_pairs};
use mhk_core::subgroups::enumerate_subgroups;
use mhk_core::{fingerprint, EnumBudget};

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for s in ["B2[p=3,m=1]", "C3[p=3,m1=1,m2=1,m3=1;A=3]", "A.Mp1[p=5,m=1,n=1;A=25]"] {
        let spec = parse_spec(s).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(s), &spec, |b, spec| {
            b.iter(|| mk_family(black_box(spec)).unwrap())
        });
    }
    g.finish();
}

fn collection(c: &mut Criterion) {
    let g = group("E1[p=3,r=1,s=1,t=0,u=1]");
    let pres = g.presentation().unwrap().clone();
    let word: Vec<(usize, i64)> = (0..40).map(|i| (i % pres.len(), 1 + (i as i64 % 3))).collect();
    c.bench_function("normalize 40 letters", |b| {
        b.iter(|| pres.normalize(black_box(&word)).unwrap())
    });
}

fn deciders(c: &mut Criterion) {
    let mut pairs = c.benchmark_group("metahamiltonian pairs");
    for (s, g) in groups() {
        pairs.bench_with_input(BenchmarkId::from_parameter(s), &g, |b, g| {
            b.iter(|| is_metahamiltonian_pairs(g))
        });
    }
    pairs.finish();
    let mut def = c.benchmark_group("metahamiltonian definitional");
    def.sample_size(10);
    for (s, g) in groups().into_iter().filter(|(_, g)| g.order() <= 243) {
        def.bench_with_input(BenchmarkId::from_parameter(s), &g, |b, g| {
            b.iter(|| is_metahamiltonian_def(g, EnumBudget::default()).unwrap())
        });
    }
    def.finish();
}

fn subgroups_and_invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    g.sample_size(10);
    for (s, grp) in groups() {
        g.bench_with_input(BenchmarkId::new("subgroups", s), &grp, |b, grp| {
            b.iter(|| enumerate_subgroups(grp).unwrap().len())
        });
        g.bench_with_input(BenchmarkId::new("fingerprint", s), &grp, |b, grp| {
            b.iter(|| fingerprint(grp))
        });
        g.bench_with_input(BenchmarkId::new("a_index", s), &grp, |b, grp| {
            b.iter(|| a_index_by_pairs(grp).unwrap())
        });
    }
    g.finish();
}

fn catalog(c: &mut Criterion) {
    let bounds = [OrderBound::new(2, 8), OrderBound::new(3, 6), OrderBound::new(5, 5)];
    c.bench_function("enumerate specs", |b| b.iter(|| enumerate_specs(black_box(&bounds)).len()));
    c.bench_function("unit orders mod 3^7", |b| {
        b.iter(|| (1..2187u64).filter(|u| u % 3 != 0).map(|u| unit_order(u, 3, 7).unwrap()).sum::<u64>())
    });
}

criterion_group!(benches, build, collection, deciders, subgroups_and_invariants, catalog);
criterion_main!(benches);
