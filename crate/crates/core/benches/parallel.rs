use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use conformal_heat::kernels::{apply_full_kernel_quadrature_2d_with, apply_radial_kernel_quadrature_with, ComplexTime};
use conformal_heat::par::Execution;
use conformal_heat::spectral::{apply_exp_g0_all_with, G0Exponent};
use conformal_heat::spherical::{angle, project_circle_with, FactoredField, GridField2D};
use conformal_heat::verify::gaussian_in_s;
use conformal_heat::LogRadialGrid;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn radial_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("radial_kernel_quadrature");
    let z = ComplexTime::new(Complex64::new(0.3, 0.4));
    for n in [512usize, 2048] {
        let f = gaussian_in_s(LogRadialGrid::new(3, -16.0, 16.0, n).unwrap());
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
                b.iter(|| apply_radial_kernel_quadrature_with(exec, 2, black_box(f), &z).unwrap())
            });
        }
    }
    group.finish();
}

fn planar_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("planar_kernel_quadrature");
    group.sample_size(10);
    let grid = LogRadialGrid::new(2, -8.0, 8.0, 64).unwrap();
    let field = GridField2D::from_fn(16, grid, |phi, r| {
        Complex64::from_polar((-(r.ln()).powi(2)).exp(), 2.0 * phi)
    })
    .unwrap();
    let z = ComplexTime::real(0.4);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| apply_full_kernel_quadrature_2d_with(exec, black_box(&field), &z).unwrap()));
    }
    group.finish();
}

fn spectral_components(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_all_degrees");
    let radial = gaussian_in_s(LogRadialGrid::default_for(3).unwrap());
    let fields: Vec<FactoredField> = (0..32).map(|m| FactoredField::abstract_slot(m, radial.clone()).unwrap()).collect();
    let e = G0Exponent::heat(Complex64::new(0.5, 0.1));
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| apply_exp_g0_all_with(exec, &e, black_box(&fields)).unwrap()));
    }
    group.finish();
}

fn circle_projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("circle_projection");
    let n = 1024;
    let samples: Vec<Complex64> =
        (0..n).map(|i| Complex64::from_polar(1.0, 3.0 * angle(n, i)) + Complex64::new(angle(n, i).cos(), 0.0)).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| project_circle_with(exec, 3, black_box(&samples)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, radial_quadrature, planar_quadrature, spectral_components, circle_projection);
criterion_main!(benches);
