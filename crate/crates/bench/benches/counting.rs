use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::Ratio;

use quartic_core::enumeration::{direct_count, Method};
use quartic_core::surfaces::find_lines;
use quartic_core::torsor::{build_torsor_spec, torsor_count, Mode};
use quartic_core::{FieldCtx, SurfaceId};

fn torsor(c: &mut Criterion) {
    let mut g = c.benchmark_group("torsor_count");
    g.sample_size(10);
    for (s, d, b) in [(SurfaceId::S4, -1, 1000), (SurfaceId::S1, -1, 300), (SurfaceId::S2, -5, 100)] {
        let k = FieldCtx::new(d).unwrap();
        let spec = build_torsor_spec(s).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("{s}/d={d}"), b), &b, |bch, &b| {
            bch.iter(|| torsor_count(&k, &spec, Ratio::from_integer(b), Mode::UnitReduced).unwrap())
        });
    }
    let k = FieldCtx::new(-1).unwrap();
    let spec = build_torsor_spec(SurfaceId::S3).unwrap();
    g.bench_function("s3/d=-1/full/10", |bch| {
        bch.iter(|| torsor_count(&k, &spec, Ratio::from_integer(10), Mode::Full).unwrap())
    });
    g.finish();
}

fn direct(c: &mut Criterion) {
    let mut g = c.benchmark_group("direct_count");
    g.sample_size(10);
    for s in SurfaceId::COUNTED {
        let k = FieldCtx::new(-1).unwrap();
        g.bench_function(format!("{s}/d=-1/20"), |bch| {
            bch.iter(|| direct_count(&k, s, Ratio::from_integer(20), Method::Exhaustive).unwrap())
        });
    }
    g.finish();
}

fn lines(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_lines");
    g.sample_size(10);
    let k = FieldCtx::new(-1).unwrap();
    g.bench_function("s1/d=-1/20", |bch| bch.iter(|| find_lines(&k, SurfaceId::S1, 20).unwrap()));
    g.finish();
}

criterion_group!(benches, torsor, direct, lines);
criterion_main!(benches);
