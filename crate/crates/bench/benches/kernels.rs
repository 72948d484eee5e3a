use criterion::{black_box, criterion_group, criterion_main, Criterion};
use riccati_core::catalog::instantiate;
use riccati_core::riccati::{certify, GridPolicy};
use riccati_core::specfun::{bessel_zero, hyp2f1};
use riccati_core::verifier::{radial_integral, spectral_lambda1};
use riccati_core::{ModelGeometry, ParamBinding, ScalarExpr};

fn special_functions(c: &mut Criterion) {
    c.bench_function("bessel_zero(0, 1)", |b| b.iter(|| bessel_zero(black_box(0.0), black_box(1)).unwrap()));
    c.bench_function("bessel_zero(10.5, 20)", |b| b.iter(|| bessel_zero(black_box(10.5), black_box(20)).unwrap()));
    c.bench_function("hyp2f1 z=-0.5", |b| b.iter(|| hyp2f1(0.3, 1.2, 2.0, black_box(-0.5)).unwrap()));
    c.bench_function("hyp2f1 z=-1000", |b| b.iter(|| hyp2f1(0.3, 1.2, 2.0, black_box(-1000.0)).unwrap()));
}

fn expressions(c: &mut Criterion) {
    let e = ScalarExpr::parse("(n-2)/(2*t) + 1/(2*t*log(exp(1)*D/t))").unwrap();
    let b = ParamBinding::new().with("n", 3.0).with("D", 1.0);
    c.bench_function("eval_d acr G", |bn| bn.iter(|| e.eval_d(black_box(0.3), &b).unwrap()));
}

fn certification(c: &mut Criterion) {
    let inst = instantiate("hardy", &ParamBinding::new().with("n", 3.0).with("C", 2.0)).unwrap();
    let g = inst.spec.bind(&inst.g);
    c.bench_function("certify hardy 512", |b| {
        b.iter(|| certify(&inst.spec, &g, &GridPolicy::Log, 512, 1e-8).unwrap())
    });
    let bv = instantiate("brezis_vazquez", &ParamBinding::new()).unwrap();
    let g = bv.spec.bind(&bv.g);
    c.bench_function("certify brezis_vazquez 512", |b| {
        b.iter(|| certify(&bv.spec, &g, &GridPolicy::Log, 512, 1e-8).unwrap())
    });
}

fn quadrature_and_spectrum(c: &mut Criterion) {
    let geo = ModelGeometry::new(-1.0, 3, 2.0).unwrap();
    c.bench_function("radial_integral hyperbolic", |b| {
        b.iter(|| radial_integral(&geo, |t| Ok((-t * t).exp()), black_box(5.0), 0.0).unwrap())
    });
    let disk = ModelGeometry::new(0.0, 2, 2.0).unwrap();
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("unit disk N=1000", |b| b.iter(|| spectral_lambda1(&disk, 1.0, black_box(1000)).unwrap()));
    group.finish();
}

criterion_group!(benches, special_functions, expressions, certification, quadrature_and_spectrum);
criterion_main!(benches);
