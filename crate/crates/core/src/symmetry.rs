//! Explicit fiber-preserving isometries.
//!
//! Homogeneity is certified by constructing the isometry that carries one
//! fiber to another and checking it, never by searching a group.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{IsometrySO4, UnitVector};
use crate::error::{Error, Result};
use crate::hopf::{complex_hopf_fiber, FiberSampler};
use crate::sampling;

/// Residual bound for fiber-to-fiber checks on `S^3`.
pub const FIBER_TOL: f64 = 1e-9;
/// Residual bound for the affine screw-motion checks.
pub const LINE_TOL: f64 = 1e-12;
/// Line parameters sampled by the screw-motion checks.
pub const LINE_SAMPLES: [f64; 5] = [-10.0, -1.0, 0.0, 1.0, 10.0];

/// Left multiplication by `y conj(x)`, which takes `x` to `y` and the Hopf
/// fiber `{x e^{it}}` to `{y e^{it}}`.
pub fn hopf_transitivity_witness(x: &UnitVector, y: &UnitVector) -> Result<IsometrySO4> {
    let (qx, qy) = (x.to_quaternion()?, y.to_quaternion()?);
    let q = (qy * qx.conj())
        .normalize()
        .ok_or(Error::NotUnit { norm: 0.0 })?;
    IsometrySO4::left_multiplication(q)
}

/// Outcome of a sampled fiber-preservation or transitivity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub ok: bool,
    pub worst_residual: f64,
    /// A sampled point realizing `worst_residual`.
    pub witness: Option<Vec<f64>>,
    pub trials: usize,
}

impl SymmetryReport {
    fn from_samples(samples: Vec<(f64, Vec<f64>)>, tol: f64) -> Self {
        let trials = samples.len();
        let mut worst = 0.0f64;
        let mut witness = None;
        for (r, p) in samples {
            if !(r <= worst) {
                worst = r;
                witness = Some(p);
            }
        }
        Self {
            ok: worst < tol,
            worst_residual: worst,
            witness,
            trials,
        }
    }
}

/// Checks that `g` maps fibers to fibers: for random `x`, every grid point
/// `p` of `fiber(x)` must satisfy `g p ∈ fiber(g x)`.
pub fn fiber_preservation_check<F>(fibration: F, g: &IsometrySO4, trials: usize, seed: u64) -> Result<SymmetryReport>
where
    F: Fn(&UnitVector) -> Result<FiberSampler> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let samples = sampling::par_samples(trials, seed, |rng| -> Result<(f64, Vec<f64>)> {
        let x = UnitVector::random(3, rng);
        let source = fibration(&x)?;
        let target = fibration(&g.apply(&x)?)?;
        let mut worst = (0.0f64, x.coords().to_vec());
        for p in source.grid(16) {
            let gp = g.apply(&p)?;
            let r = target.residual(gp.coords());
            if !(r <= worst.0) {
                worst = (r, gp.into_coords());
            }
        }
        Ok(worst)
    });
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SymmetryReport::from_samples(samples, FIBER_TOL))
}

/// For random pairs `(x, y)` in `S^3`, checks that the witness takes `x` to
/// `y` and the complex Hopf fiber of `x` into that of `y`.
pub fn hopf_transitivity_check(trials: usize, seed: u64) -> Result<SymmetryReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let samples = sampling::par_samples(trials, seed, |rng| -> Result<(f64, Vec<f64>)> {
        let x = UnitVector::random(3, rng);
        let y = UnitVector::random(3, rng);
        let g = hopf_transitivity_witness(&x, &y)?;
        let gx = g.apply(&x)?;
        let mut worst = crate::algebra::norm(
            &gx.coords().iter().zip(y.coords()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        let (fx, fy) = (complex_hopf_fiber(&x)?, complex_hopf_fiber(&y)?);
        for _ in 0..8 {
            let p = fx.sample_angle(rng.random_range(0.0..std::f64::consts::TAU));
            worst = worst.max(fy.residual(g.apply(&p)?.coords()));
        }
        Ok((worst, x.into_coords()))
    });
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SymmetryReport::from_samples(samples, FIBER_TOL))
}

/// A line `{point + s direction}` of R^3 with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: [f64; 3],
    pub direction: [f64; 3],
}

impl Line {
    pub fn point_at(&self, s: f64) -> [f64; 3] {
        std::array::from_fn(|k| self.point[k] + s * self.direction[k])
    }

    pub fn distance_to(&self, q: &[f64; 3]) -> f64 {
        let d: [f64; 3] = std::array::from_fn(|k| q[k] - self.point[k]);
        let along: f64 = (0..3).map(|k| d[k] * self.direction[k]).sum();
        (0..3)
            .map(|k| (d[k] - along * self.direction[k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// R^3 layered by horizontal planes, each filled by parallel lines whose
/// direction turns at rate `alpha` with height: the line through `(v, c)`
/// has direction `(cos(alpha c), sin(alpha c), 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFibrationR3 {
    pub alpha: f64,
}

impl LineFibrationR3 {
    pub fn direction_angle(&self, height: f64) -> f64 {
        self.alpha * height
    }

    pub fn line_through(&self, p: &[f64; 3]) -> Line {
        let (s, c) = self.direction_angle(p[2]).sin_cos();
        Line {
            point: *p,
            direction: [c, s, 0.0],
        }
    }
}

pub fn figure1_fibration(alpha: f64) -> LineFibrationR3 {
    LineFibrationR3 { alpha }
}

/// `(v, z) -> (R_{alpha t} v + w, z + t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScrewMotion {
    pub alpha: f64,
    pub t: f64,
    pub w: [f64; 2],
}

impl ScrewMotion {
    pub fn identity(alpha: f64) -> Self {
        Self { alpha, t: 0.0, w: [0.0, 0.0] }
    }

    /// The motion taking the line through `p1` to the line through `p2`.
    pub fn between(fib: &LineFibrationR3, p1: &[f64; 3], p2: &[f64; 3]) -> Self {
        let t = p2[2] - p1[2];
        let r = rotate2(fib.alpha * t, [p1[0], p1[1]]);
        Self {
            alpha: fib.alpha,
            t,
            w: [p2[0] - r[0], p2[1] - r[1]],
        }
    }

    pub fn apply(&self, p: &[f64; 3]) -> [f64; 3] {
        let r = rotate2(self.alpha * self.t, [p[0], p[1]]);
        [r[0] + self.w[0], r[1] + self.w[1], p[2] + self.t]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.alpha != other.alpha {
            return Err(Error::InvalidParameter(
                "screw motions with different turning rates".into(),
            ));
        }
        let rw = rotate2(self.alpha * self.t, other.w);
        Ok(Self {
            alpha: self.alpha,
            t: self.t + other.t,
            w: [rw[0] + self.w[0], rw[1] + self.w[1]],
        })
    }

    pub fn inverse(&self) -> Self {
        let r = rotate2(-self.alpha * self.t, self.w);
        Self {
            alpha: self.alpha,
            t: -self.t,
            w: [-r[0], -r[1]],
        }
    }
}

fn rotate2(angle: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// For random line pairs, builds [`ScrewMotion::between`] and checks that it
/// carries the first line onto the second and a further random line of the
/// fibration onto a line of the fibration.
pub fn screw_transitivity_check(fib: &LineFibrationR3, pairs: usize, seed: u64) -> Result<SymmetryReport> {
    if pairs == 0 {
        return Err(Error::InvalidParameter("pairs must be >= 1".into()));
    }
    let samples = sampling::par_samples(pairs, seed, |rng| {
        let mut point = || -> [f64; 3] { std::array::from_fn(|_| rng.random_range(-10.0..10.0)) };
        let (p1, p2, p3) = (point(), point(), point());
        let g = ScrewMotion::between(fib, &p1, &p2);
        let (l1, l2, l3) = (fib.line_through(&p1), fib.line_through(&p2), fib.line_through(&p3));
        let image_line = fib.line_through(&g.apply(&p3));
        let worst = LINE_SAMPLES
            .iter()
            .map(|&s| {
                let onto = l2.distance_to(&g.apply(&l1.point_at(s)));
                let preserved = image_line.distance_to(&g.apply(&l3.point_at(s)));
                onto.max(preserved)
            })
            .fold(0.0f64, f64::max);
        (worst, p1.to_vec())
    });
    Ok(SymmetryReport::from_samples(samples, LINE_TOL))
}
