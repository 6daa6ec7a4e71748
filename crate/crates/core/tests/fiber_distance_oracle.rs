//! Brute-force oracle for distances between circle fibers of `S^3`.

use std::f64::consts::{FRAC_PI_2, TAU};

use hopflab_core::algebra::angle_between;
use hopflab_core::hopf::{complex_hopf_fiber, fiber_distance};
use hopflab_core::sampling::stream_rng;
use hopflab_core::{FiberSampler, UnitVector};

const N: usize = 1024;

/// Ternary search for the minimum of a unimodal function on `[lo, hi]`.
fn refine(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi))
}

/// `min_t d(p, g(t))` by a 1024-point scan refined around the best sample.
fn point_to_circle(p: &[f64], g: &FiberSampler) -> f64 {
    let d = |t: f64| angle_between(p, g.sample_angle(t).coords());
    let step = TAU / N as f64;
    let best = (0..N).min_by(|&a, &b| d(a as f64 * step).total_cmp(&d(b as f64 * step))).unwrap();
    let t0 = best as f64 * step;
    refine(d, t0 - step, t0 + step)
}

/// `min_{s,t} d(f(s), g(t))` over a 1024 x 1024 grid, then refined.
fn circle_to_circle(f: &FiberSampler, g: &FiberSampler) -> f64 {
    let step = TAU / N as f64;
    let fs: Vec<Vec<f64>> = (0..N).map(|k| f.sample_angle(k as f64 * step).into_coords()).collect();
    let gs: Vec<Vec<f64>> = (0..N).map(|k| g.sample_angle(k as f64 * step).into_coords()).collect();
    let mut best = (f64::INFINITY, 0);
    for (i, p) in fs.iter().enumerate() {
        for q in &gs {
            let d = angle_between(p, q);
            if d < best.0 {
                best = (d, i);
            }
        }
    }
    let s0 = best.1 as f64 * step;
    refine(|s| point_to_circle(f.sample_angle(s).coords(), g), s0 - step, s0 + step)
}

#[test]
fn orthogonal_fibers_are_a_right_angle_apart() {
    let f = complex_hopf_fiber(&UnitVector::axis(3, 0)).unwrap();
    let g = complex_hopf_fiber(&UnitVector::axis(3, 2)).unwrap();
    let oracle = circle_to_circle(&f, &g);
    assert!((oracle - FRAC_PI_2).abs() < 1e-9, "{oracle}");
    let d = fiber_distance(&f, &g, 64).unwrap();
    assert!((d.min - FRAC_PI_2).abs() < 1e-12);
    assert!(d.spread() < 1e-12);
}

#[test]
fn random_fibers_match_the_oracle() {
    let mut rng = stream_rng(99, 0);
    for _ in 0..4 {
        let f = complex_hopf_fiber(&UnitVector::random(3, &mut rng)).unwrap();
        let g = complex_hopf_fiber(&UnitVector::random(3, &mut rng)).unwrap();
        let d = fiber_distance(&f, &g, 32).unwrap();
        let oracle_min = circle_to_circle(&f, &g);
        assert!((d.min - oracle_min).abs() < 1e-7, "{} vs {oracle_min}", d.min);
        let oracle_max = f
            .grid(32)
            .iter()
            .map(|p| point_to_circle(p.coords(), &g))
            .fold(0.0, f64::max);
        assert!((d.max_over_basepoints - oracle_max).abs() < 1e-7);
    }
}

#[test]
fn non_parallel_circles_have_positive_spread() {
    // a Hopf fiber against a great circle that is not one
    let f = complex_hopf_fiber(&UnitVector::axis(3, 0)).unwrap();
    let g = FiberSampler::from_basis(3, vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.6, 0.0, 0.0, 0.8]]).unwrap();
    let d = fiber_distance(&f, &g, 64).unwrap();
    let oracle_min = circle_to_circle(&f, &g);
    assert!((d.min - oracle_min).abs() < 1e-3, "{} vs {oracle_min}", d.min);
    assert!(d.spread() > 0.1);
}

#[test]
fn small_grids_are_rejected() {
    let f = complex_hopf_fiber(&UnitVector::axis(3, 0)).unwrap();
    assert!(fiber_distance(&f, &f, 15).is_err());
}
