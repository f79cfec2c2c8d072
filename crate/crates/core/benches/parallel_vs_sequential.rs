use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use pil_core::boundary_models::{conjugacy_residual, BlaschkeProduct};
use pil_core::plaque_engine::{
    component_census, pullback_tower, signature_estimate, BackwardOrbit, DepthSchedule, Disk, SignatureParams,
    TowerOptions,
};
use pil_core::poly_dynamics::Polynomial;
use pil_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn signature(c: &mut Criterion) {
    let p = Polynomial::from_real(&[0.0, 1.0, 1.0]).unwrap();
    let orbit = BackwardOrbit::fixed_point(&p, Complex64::new(0.0, 0.0), 54).unwrap();
    let mut group = c.benchmark_group("signature_estimate");
    group.sample_size(10);
    for (name, exec) in MODES {
        let params = SignatureParams {
            radius: 0.3,
            shrink: 0.5,
            rings: 2,
            schedule: DepthSchedule::List { depths: vec![14, 27, 54] },
            exec,
            ..SignatureParams::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &params, |b, params| {
            b.iter(|| signature_estimate(&p, &orbit, Complex64::new(-0.5, 0.0), black_box(params)).unwrap())
        });
    }
    group.finish();
}

fn conjugacy(c: &mut Criterion) {
    let s = 1.0 / 3f64.sqrt();
    let b = BlaschkeProduct::new(vec![Complex64::new(0.0, s), Complex64::new(0.0, -s)], 0.0).unwrap();
    let mut group = c.benchmark_group("conjugacy_residual");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| conjugacy_residual(black_box(&b), 14, exec).unwrap())
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let p = Polynomial::monomial(2).unwrap();
    let opts = TowerOptions::default();
    let orbit = BackwardOrbit::fixed_point(&p, Complex64::new(0.0, 0.0), 8).unwrap();
    let v = pullback_tower(&p, &orbit, Disk::new(Complex64::new(0.0, 0.0), 0.8).unwrap(), 8, &opts).unwrap();
    let w = Disk::new(Complex64::new(0.5, 0.0), 0.05).unwrap();
    let mut group = c.benchmark_group("component_census");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| component_census(black_box(w), &v, 8, &opts, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, signature, conjugacy, census);
criterion_main!(benches);
