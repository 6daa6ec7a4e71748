use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hopflab_bench::fiber_pair;
use hopflab_core::algebra::{haar_unit_quaternion, oct_mul, quat_mul, random_unit_octonion};
use hopflab_core::grassmann::{moduli_to_plane, plane_to_moduli};
use hopflab_core::hopf::fiber_distance;
use hopflab_core::repcheck::{fs_indicator, Character, GroupId, GroupSampler, RepId};
use hopflab_core::sampling::stream_rng;
use hopflab_core::{HopfFamily, OrientedPlane2};

fn algebra(c: &mut Criterion) {
    let mut rng = stream_rng(1, 0);
    let (p, q) = (haar_unit_quaternion(&mut rng), haar_unit_quaternion(&mut rng));
    c.bench_function("quat_mul", |b| b.iter(|| quat_mul(black_box(p), black_box(q))));
    let (x, y) = (random_unit_octonion(&mut rng), random_unit_octonion(&mut rng));
    c.bench_function("oct_mul", |b| b.iter(|| oct_mul(black_box(x), black_box(y))));
}

fn grassmann(c: &mut Criterion) {
    let plane = OrientedPlane2::random(&mut stream_rng(2, 0));
    c.bench_function("grassmann_round_trip", |b| {
        b.iter(|| moduli_to_plane(&plane_to_moduli(black_box(&plane))).unwrap())
    });
}

fn fibers(c: &mut Criterion) {
    let mut group = c.benchmark_group("fiber_distance_grid256");
    for (family, dim) in [
        (HopfFamily::Complex, 3),
        (HopfFamily::Quaternionic, 7),
        (HopfFamily::Octonionic, 15),
    ] {
        let (f, g) = fiber_pair(family, dim);
        group.bench_function(format!("S{dim}"), |b| b.iter(|| fiber_distance(black_box(&f), &g, 256).unwrap()));
    }
    group.finish();
}

fn indicators(c: &mut Criterion) {
    let mut group = c.benchmark_group("fs_indicator_n1e4");
    group.sample_size(10);
    for g in [GroupId::SU2, GroupId::SU3, GroupId::Sp2] {
        let chi = Character::new(g.clone(), RepId::Defining).unwrap();
        let sampler = GroupSampler::new(g.clone());
        group.bench_function(g.to_string(), |b| b.iter(|| fs_indicator(&chi, &sampler, 10_000, 3).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, algebra, grassmann, fibers, indicators);
criterion_main!(benches);
