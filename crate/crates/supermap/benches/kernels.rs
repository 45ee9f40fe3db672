use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use supermap::classify::{osp12_pool, verify_untwisted};
use supermap::coordalg::{quotient_algebra, IdealSpec, Point, RingSpec};
use supermap::liesuper::{construct_basic, validate_superalgebra, SuperAlgebra};
use supermap::mapalg::build_map_algebra;
use supermap::modules::{
    envelope, evaluation_module, irreducible_quotient, kac_module, kac_setup, natural_module, one_dim_module,
    tensor_product,
};
use supermap::par::set_parallel;
use supermap::{Matrix, Rational};

type Q = Rational;

const MODES: [(&str, bool); 2] = [("parallel", true), ("sequential", false)];

fn sl21() -> Arc<SuperAlgebra<Q>> {
    Arc::new(construct_basic("sl", &[2, 1]).unwrap())
}

fn bench_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul-48");
    let n = 48;
    let a = Matrix::from_flat(n, n, (0..n * n).map(|k| Q::new((k % 17) as i64 - 8, 1 + (k % 5) as i64).unwrap()).collect());
    for (name, on) in MODES {
        set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| a.mul(&a)));
    }
    set_parallel(true);
    group.finish();
}

fn bench_structure(c: &mut Criterion) {
    let g: SuperAlgebra<Q> = construct_basic("osp", &[3, 2]).unwrap();
    let mut group = c.benchmark_group("validate-osp32");
    group.sample_size(20);
    for (name, on) in MODES {
        set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| validate_superalgebra(&g)));
    }
    set_parallel(true);
    group.finish();
}

fn bench_envelope(c: &mut Criterion) {
    let g = sl21();
    let pts = [(Point::scalar(Q::zero()), 1), (Point::scalar(Q::one()), 1)];
    let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(pts.to_vec()).unwrap()).unwrap();
    let m = build_map_algebra(g.clone(), Arc::new(a)).unwrap();
    let n = natural_module(&g).unwrap();
    let v = tensor_product(
        &evaluation_module(&m, &[(pts[0].0.clone(), n.clone())]).unwrap(),
        &evaluation_module(&m, &[(pts[1].0.clone(), n)]).unwrap(),
    )
    .unwrap();
    let mut group = c.benchmark_group("envelope-9");
    group.sample_size(10);
    for (name, on) in MODES {
        set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| envelope(&v).len()));
    }
    set_parallel(true);
    group.finish();
}

fn bench_kac_quotient(c: &mut Criterion) {
    let g = sl21();
    let a = quotient_algebra(RingSpec::polynomial(1), IdealSpec::new(vec![(Point::scalar(Q::zero()), 2)]).unwrap()).unwrap();
    let setup = kac_setup(g, Arc::new(a)).unwrap();
    let theta = setup.central_functional(&[vec![Q::new(7, 3).unwrap(), Q::one()]]).unwrap();
    let base = one_dim_module(setup.even.algebra(), &theta).unwrap().with_frame(setup.even_frame.clone());
    let kac = kac_module(&setup, &base).unwrap();
    let mut group = c.benchmark_group("kac-quotient-16");
    group.sample_size(10);
    for (name, on) in MODES {
        set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| irreducible_quotient(&kac.total, &kac.generator).unwrap().module.dim())
        });
    }
    set_parallel(true);
    group.finish();
}

fn bench_pool(c: &mut Criterion) {
    let pool = osp12_pool().unwrap();
    let mut group = c.benchmark_group("pool-osp12");
    group.sample_size(10);
    for (name, on) in MODES {
        set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verify_untwisted(&pool).passed()));
    }
    set_parallel(true);
    group.finish();
}

criterion_group!(kernels, bench_matmul, bench_structure, bench_envelope, bench_kac_quotient, bench_pool);
criterion_main!(kernels);
