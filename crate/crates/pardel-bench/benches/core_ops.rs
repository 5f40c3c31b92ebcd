//! Criterion benchmarks for the heavy exact-arithmetic paths: the ruling
//! discriminant, composition with factor stripping, reconstruction, the
//! tangency fit and the full group closure.

use criterion::{criterion_group, criterion_main, Criterion};

use pardel_core::moduli::{
    self, fitting, group, torelli, ModuliParams, NamedMapTag,
};
use pardel_core::projective::Ruling;
use pardel_core::scalar::ExactScalar;

fn params25() -> ModuliParams {
    ModuliParams::rational(ExactScalar::from_int(2), ExactScalar::from_int(5)).unwrap()
}

fn bench_gamma_discriminant(c: &mut Criterion) {
    let symbolic = ModuliParams::symbolic();
    let gamma = moduli::gamma_curve(&symbolic);
    c.bench_function("gamma_ruling_discriminant_symbolic", |b| {
        b.iter(|| moduli::gamma_ruling_discriminant(&gamma, Ruling::Vertical))
    });
}

fn bench_tau_composition(c: &mut Criterion) {
    let params = params25();
    let tau = moduli::plane_map(&params, NamedMapTag::Tau);
    let cands = moduli::contracted_candidates(&params);
    c.bench_function("tau_squared_with_stripping", |b| {
        b.iter(|| tau.compose(&tau, &cands))
    });
}

fn bench_torelli(c: &mut Criterion) {
    let gamma = moduli::gamma_curve(&params25());
    c.bench_function("torelli_reconstruct_2_5", |b| {
        b.iter(|| torelli::torelli_reconstruct(&gamma).unwrap())
    });
}

fn bench_phiw_fit(c: &mut Criterion) {
    let params = params25();
    c.bench_function("phi_w_second_tangency_fit", |b| {
        b.iter(|| fitting::derive_phi_w_second(&params, None, None).unwrap())
    });
}

fn bench_group_closure(c: &mut Criterion) {
    let params = params25();
    let mut g = c.benchmark_group("group");
    g.sample_size(10);
    g.bench_function("aut_closure_specialized", |b| {
        b.iter(|| group::aut_s_closure(&params))
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_gamma_discriminant,
    bench_tau_composition,
    bench_torelli,
    bench_phiw_fit,
    bench_group_closure
);
criterion_main!(benches);
