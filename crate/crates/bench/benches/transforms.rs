use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use imw_bench::{su2_decomposition, su2_lp};
use imw_core::lp::solve;
use imw_core::macwilliams::{block_macwilliams, macwilliams_from_sectors, su2_macwilliams_closed};
use imw_core::{build_irrep_by_highest_weight, conjugation_sectors, su2_irrep, IrrepLabel};

fn closed_form(c: &mut Criterion) {
    let mut g = c.benchmark_group("su2_closed_form");
    for tj in [4u32, 8, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(tj), &tj, |b, &tj| {
            b.iter(|| su2_macwilliams_closed(black_box(tj)).unwrap())
        });
    }
    g.finish();
}

fn from_sectors(c: &mut Criterion) {
    let mut g = c.benchmark_group("macwilliams_from_sectors");
    for tj in [4u32, 7] {
        let dec = su2_decomposition(tj);
        g.bench_with_input(BenchmarkId::from_parameter(tj), &dec, |b, dec| {
            b.iter(|| macwilliams_from_sectors(black_box(dec)).unwrap())
        });
    }
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    c.bench_function("conjugation_sectors/su2_2j7", |b| {
        let rep = su2_irrep(7);
        b.iter(|| conjugation_sectors(black_box(&rep)).unwrap())
    });
    c.bench_function("block_macwilliams/su3_adjoint", |b| {
        let rep = build_irrep_by_highest_weight(&IrrepLabel::new(vec![1, 1]).unwrap()).unwrap();
        let dec = conjugation_sectors(&rep).unwrap();
        b.iter(|| block_macwilliams(black_box(&dec)).unwrap())
    });
}

fn lp(c: &mut Criterion) {
    let feasible = su2_lp(7, 2, 3);
    let infeasible = su2_lp(3, 2, 2);
    c.bench_function("lp/feasible_su2_2j7", |b| b.iter(|| solve(black_box(&feasible)).unwrap()));
    c.bench_function("lp/infeasible_su2_2j3", |b| b.iter(|| solve(black_box(&infeasible)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = closed_form, from_sectors, decomposition, lp
}
criterion_main!(benches);
