use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dirac_carousel::dirac::{counting_function, eigenvalues, SolverConfig};
use dirac_carousel::ensembles::{
    airy_counting, airy_noise, circular_beta_coeffs, sine_beta_operator, AiryConfig, GridSpec,
};
use dirac_carousel::szego::{eigen_angles_oracle, unitary_dirac_operator, UnitaryCoefficients};

fn unitary(c: &mut Criterion) {
    let alpha = circular_beta_coeffs(64, 2.0, 1).unwrap();
    c.bench_function("oracle n=64", |b| b.iter(|| eigen_angles_oracle(black_box(&alpha)).unwrap()));
    let op = unitary_dirac_operator(&UnitaryCoefficients::Standard(alpha)).unwrap();
    let cfg = SolverConfig::default();
    let w = (-64.0 * std::f64::consts::PI, 64.0 * std::f64::consts::PI);
    c.bench_function("unitary spectrum n=64", |b| b.iter(|| eigenvalues(black_box(&op), w, &cfg).unwrap()));
}

fn sine(c: &mut Criterion) {
    let grid = GridSpec::log(500);
    c.bench_function("sine path 500 cells", |b| b.iter(|| sine_beta_operator(2.0, &grid, black_box(3)).unwrap()));
    let op = sine_beta_operator(2.0, &grid, 3).unwrap();
    let cfg = SolverConfig::default();
    c.bench_function("sine counting", |b| b.iter(|| counting_function(&op, black_box(20.0), &cfg).unwrap()));
}

fn airy(c: &mut Criterion) {
    let noise = airy_noise(2.0, &AiryConfig::default(), 5).unwrap();
    c.bench_function("airy count", |b| b.iter(|| airy_counting(&noise, black_box(4.0)).unwrap()));
}

criterion_group!(benches, unitary, sine, airy);
criterion_main!(benches);
