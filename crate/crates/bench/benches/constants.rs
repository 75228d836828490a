use criterion::{criterion_group, criterion_main, Criterion};

use quartic_core::constants::{alpha_polytope, omega_infinity, theta0, AlphaMode};
use quartic_core::{FieldCtx, SurfaceId};

fn theta(c: &mut Criterion) {
    let k = FieldCtx::new(-1).unwrap();
    c.bench_function("theta0/d=-1/1e5", |b| b.iter(|| theta0(&k, 100_000).unwrap()));
}

fn omega(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega_infinity");
    g.sample_size(10);
    for s in SurfaceId::COUNTED {
        g.bench_function(format!("{s}/1e6"), |b| b.iter(|| omega_infinity(s, 1_000_000, 1).unwrap()));
    }
    g.finish();
}

fn alpha(c: &mut Criterion) {
    let mut g = c.benchmark_group("alpha_mc");
    g.sample_size(10);
    g.bench_function("s1/1e6", |b| {
        b.iter(|| alpha_polytope(SurfaceId::S1, AlphaMode::MonteCarlo { samples: 1_000_000, seed: 1 }).unwrap())
    });
    g.finish();
}

criterion_group!(benches, theta, omega, alpha);
criterion_main!(benches);
