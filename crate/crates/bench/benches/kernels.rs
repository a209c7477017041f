use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hetg2::curvature::{coassociative, curvature_3ad, instanton_obstruction, wedge_trace, Geometry};
use hetg2::heisenberg::{connection_lambda, curvature_fp, heisenberg};
use hetg2::report::{run_suite, Params, Suite};
use hetg2::scalar::{Scalar, Sym};
use hetg2::spinor::{build_rep, sp1_identity_suite};
use hetg2::structures::{ring_torsion_classes, RingSu3};

fn kernels(c: &mut Criterion) {
    let lam = Scalar::sym(Sym::Lambda);
    let model = heisenberg();
    c.bench_function("curvature_first_principles", |b| {
        b.iter(|| {
            let conn = connection_lambda(&model, black_box(&lam)).unwrap();
            curvature_fp(&conn, &model)
        })
    });
    let r = curvature_3ad(&lam);
    c.bench_function("trace_3ad_symbolic", |b| b.iter(|| wedge_trace(black_box(&r), &r).unwrap()));
    let (psi, _) = coassociative(Geometry::ThreeAd).unwrap();
    c.bench_function("instanton_obstruction_3ad", |b| b.iter(|| instanton_obstruction(black_box(&r), &psi).unwrap()));
    let ring = RingSu3::new().unwrap();
    c.bench_function("torsion_classes_su3", |b| {
        b.iter(|| ring_torsion_classes(&ring.ring, black_box(&ring.phi()), &ring.psi()).unwrap())
    });
    c.bench_function("clifford_rep_m3", |b| b.iter(|| build_rep(black_box(3))));
    c.bench_function("sp1_identities", |b| b.iter(|| sp1_identity_suite().unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    g.bench_function("all", |b| b.iter(|| run_suite(Suite::All, &Params::default())));
    g.finish();
}

criterion_group!(benches, kernels, suites);
criterion_main!(benches);
