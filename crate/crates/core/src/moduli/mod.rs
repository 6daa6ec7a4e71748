//! Great-circle fibrations of open sets of `S^3` as graphs of
//! distance-decreasing maps between the two factors of `S^2 x S^2`.

mod curvature;
mod differential;

pub use curvature::{
    charts, curvature_from_structure_constants, numeric_frame_curvature, structure_constants,
    Metric2, Point2,
};
pub use differential::{
    classify_round_radius, differential, differential_in_frames, ellipse, homogeneity_scan,
    round_map_classifier, EllipseData, HomogeneityReport, RoundVerdict, TangentFrame2,
    DEFAULT_STEP, HOMOGENEITY_TOL,
};

use std::f64::consts::FRAC_PI_2;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::algebra::{angle_between, UnitVector};
use crate::error::{Error, Result};
use crate::grassmann::{moduli_to_plane, Matrix3, ModuliPoint, OrientedPlane2};
use crate::hopf::FiberSampler;
use crate::sampling;

/// Validator strictness: a sampled ratio must stay below `1 - STRICTNESS`.
pub const STRICTNESS: f64 = 1e-12;

/// A map from a domain `V` of `S^2` (points as unit 3-vectors) to `S^2`.
pub trait SphereMap: Send + Sync {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3];

    /// Geodesic distance from `x` to the complement of the domain; positive
    /// exactly on the domain.
    fn domain_margin(&self, _x: &[f64; 3]) -> f64 {
        f64::INFINITY
    }

    /// Uniform point of the domain.
    fn sample_domain(&self, rng: &mut dyn RngCore) -> [f64; 3] {
        loop {
            let x = random_s2(rng);
            if self.domain_margin(&x) > 0.0 {
                return x;
            }
        }
    }

    fn describe(&self) -> String;
}

impl<M: SphereMap + ?Sized> SphereMap for &M {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        (**self).eval(x)
    }
    fn domain_margin(&self, x: &[f64; 3]) -> f64 {
        (**self).domain_margin(x)
    }
    fn sample_domain(&self, rng: &mut dyn RngCore) -> [f64; 3] {
        (**self).sample_domain(rng)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<M: SphereMap + ?Sized> SphereMap for Box<M> {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        (**self).eval(x)
    }
    fn domain_margin(&self, x: &[f64; 3]) -> f64 {
        (**self).domain_margin(x)
    }
    fn sample_domain(&self, rng: &mut dyn RngCore) -> [f64; 3] {
        (**self).sample_domain(rng)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

pub fn random_s2(rng: &mut dyn RngCore) -> [f64; 3] {
    UnitVector::random(2, rng)
        .to_array3()
        .expect("S^2 sample has three coordinates")
}

/// Geodesic distance on `S^2`.
pub fn s2_distance(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    angle_between(x, y)
}

/// Angle from the north pole `(0, 0, 1)`.
pub fn polar_angle(x: &[f64; 3]) -> f64 {
    x[0].hypot(x[1]).atan2(x[2])
}

/// `f = c` on all of `S^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantMap {
    value: [f64; 3],
}

impl ConstantMap {
    pub fn new(value: &UnitVector) -> Result<Self> {
        Ok(Self {
            value: value.to_array3()?,
        })
    }

    pub fn value(&self) -> [f64; 3] {
        self.value
    }
}

impl SphereMap for ConstantMap {
    fn eval(&self, _x: &[f64; 3]) -> [f64; 3] {
        self.value
    }

    fn describe(&self) -> String {
        format!("constant {:?}", self.value)
    }
}

/// Geodesic polar contraction `theta -> lambda theta` about the north pole,
/// azimuth preserved, on the open cap `theta < cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarContraction {
    lambda: f64,
    cap: f64,
}

impl PolarContraction {
    /// Contraction on the open upper hemisphere.
    pub fn new(lambda: f64) -> Result<Self> {
        Self::with_cap(lambda, FRAC_PI_2)
    }

    pub fn with_cap(lambda: f64, cap: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!("contraction factor {lambda}")));
        }
        if !(cap > 0.0 && cap <= std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!("cap angle {cap}")));
        }
        Ok(Self { lambda, cap })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }
}

impl SphereMap for PolarContraction {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        let theta = polar_angle(x);
        let sin_theta = x[0].hypot(x[1]);
        // sin(lambda theta) / sin(theta), which tends to lambda at the pole
        let scale = if theta < 1e-8 {
            self.lambda
        } else {
            (self.lambda * theta).sin() / sin_theta
        };
        [scale * x[0], scale * x[1], (self.lambda * theta).cos()]
    }

    fn domain_margin(&self, x: &[f64; 3]) -> f64 {
        self.cap - polar_angle(x)
    }

    fn describe(&self) -> String {
        format!("polar contraction lambda={} on theta < {}", self.lambda, self.cap)
    }
}

/// The identity map of `S^2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityMap;

impl SphereMap for IdentityMap {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        *x
    }

    fn describe(&self) -> String {
        "identity".into()
    }
}

/// `x -> R x` for a rotation `R`; preserves every distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMap {
    pub rotation: Matrix3,
}

impl SphereMap for RotationMap {
    fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        crate::grassmann::mat3_apply(&self.rotation, x)
    }

    fn describe(&self) -> String {
        "rotation".into()
    }
}

/// Outcome of [`validate_distance_decreasing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub ok: bool,
    /// Largest sampled `d(f x, f y) / d(x, y)`.
    pub worst_ratio: f64,
    /// The pair attaining `worst_ratio`.
    pub witness: Option<([f64; 3], [f64; 3])>,
    pub pairs: usize,
}

/// Samples `pairs` pairs of distinct domain points and checks
/// `d(f x, f y) < d(x, y)`.
///
/// Half the pairs are independent uniform points; the other half are close
/// pairs (separation up to 0.05 rad), which probe the infinitesimal ratio.
pub fn validate_distance_decreasing<M: SphereMap>(f: &M, pairs: usize, seed: u64) -> Result<DistanceReport> {
    if pairs == 0 {
        return Err(Error::InvalidParameter("pairs must be >= 1".into()));
    }
    let samples = sampling::par_samples(pairs, seed, |rng| {
        let x = f.sample_domain(rng);
        let y = loop {
            let y = if rng.next_u32() % 2 == 0 {
                f.sample_domain(rng)
            } else {
                let step = 0.05 * (rng.next_u64() as f64 / u64::MAX as f64);
                nearby(&x, step, rng)
            };
            if f.domain_margin(&y) > 0.0 && s2_distance(&x, &y) > 1e-12 {
                break y;
            }
        };
        let ratio = s2_distance(&f.eval(&x), &f.eval(&y)) / s2_distance(&x, &y);
        (ratio, x, y)
    });
    let mut worst = (f64::NEG_INFINITY, None);
    for (ratio, x, y) in samples {
        if !ratio.is_finite() {
            worst = (f64::NAN, Some((x, y)));
            break;
        }
        if ratio > worst.0 {
            worst = (ratio, Some((x, y)));
        }
    }
    let ok = worst.0 < 1.0 - STRICTNESS;
    Ok(DistanceReport {
        ok,
        worst_ratio: worst.0,
        witness: worst.1,
        pairs,
    })
}

/// A point at geodesic distance `step` from `x` in a random direction.
fn nearby(x: &[f64; 3], step: f64, rng: &mut dyn RngCore) -> [f64; 3] {
    let frame = TangentFrame2::at(x);
    let phi = std::f64::consts::TAU * (rng.next_u64() as f64 / u64::MAX as f64);
    frame.exp(step, phi)
}

/// Which factor of `S^2 x S^2` is the domain of the graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainFactor {
    /// Graph points are `(x, f(x))`: the domain is the self-dual factor.
    #[default]
    First,
    /// Graph points are `(f(x), x)`.
    Second,
}

/// The great-circle fibration whose fibers are the planes over the graph of a
/// validated distance-decreasing map.
#[derive(Debug, Clone)]
pub struct GreatCircleFibration<M> {
    map: M,
    factor: DomainFactor,
    validation: DistanceReport,
}

impl<M: SphereMap> GreatCircleFibration<M> {
    /// Runs [`validate_distance_decreasing`] and keeps the map if it passes.
    pub fn from_map(map: M, pairs: usize, seed: u64, factor: DomainFactor) -> Result<Self> {
        let validation = validate_distance_decreasing(&map, pairs, seed)?;
        if !validation.ok {
            return Err(Error::NotDistanceDecreasing {
                ratio: validation.worst_ratio,
            });
        }
        Ok(Self {
            map,
            factor,
            validation,
        })
    }

    pub fn map(&self) -> &M {
        &self.map
    }

    pub fn factor(&self) -> DomainFactor {
        self.factor
    }

    pub fn validation(&self) -> &DistanceReport {
        &self.validation
    }

    /// The graph point over `x`.
    pub fn moduli_point(&self, x: &[f64; 3]) -> Result<ModuliPoint> {
        let margin = self.map.domain_margin(x);
        if !(margin > 0.0) {
            return Err(Error::NearBoundary { margin, step: 0.0 });
        }
        let fx = self.map.eval(x);
        match self.factor {
            DomainFactor::First => ModuliPoint::from_arrays(*x, fx),
            DomainFactor::Second => ModuliPoint::from_arrays(fx, *x),
        }
    }

    pub fn plane(&self, x: &[f64; 3]) -> Result<OrientedPlane2> {
        moduli_to_plane(&self.moduli_point(x)?)
    }

    pub fn fiber(&self, x: &[f64; 3]) -> Result<FiberSampler> {
        let plane = self.plane(x)?;
        FiberSampler::from_basis(3, plane.frame())
    }

    /// Smallest principal angle between the fibers over `pairs` random pairs
    /// of domain points at least `1e-3` apart; a positive angle certifies
    /// that the two great circles are disjoint.
    pub fn disjointness(&self, pairs: usize, seed: u64) -> Result<DisjointnessReport> {
        if pairs == 0 {
            return Err(Error::InvalidParameter("pairs must be >= 1".into()));
        }
        let samples = sampling::par_samples(pairs, seed, |rng| -> Result<f64> {
            let x = self.map.sample_domain(rng);
            let y = loop {
                let y = self.map.sample_domain(rng);
                if s2_distance(&x, &y) > 1e-3 {
                    break y;
                }
            };
            self.fiber(&x)?.smallest_principal_angle(&self.fiber(&y)?)
        });
        let min_angle = samples
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Ok(DisjointnessReport {
            ok: min_angle > DISJOINT_ANGLE,
            min_angle,
            pairs,
        })
    }
}

/// Principal angle below which two sampled fibers count as meeting.
pub const DISJOINT_ANGLE: f64 = 1e-6;

/// Outcome of [`GreatCircleFibration::disjointness`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub ok: bool,
    pub min_angle: f64,
    pub pairs: usize,
}

/// [`GreatCircleFibration::from_map`] with the default validation budget.
pub fn fibration_from_map<M: SphereMap>(map: M, factor: DomainFactor) -> Result<GreatCircleFibration<M>> {
    GreatCircleFibration::from_map(map, 10_000, 0x6c75_636b, factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::complex_hopf_fiber;
    use crate::sampling::stream_rng;
    use std::f64::consts::FRAC_PI_3;

    fn north() -> [f64; 3] {
        [0.0, 0.0, 1.0]
    }

    #[test]
    fn polar_contraction_values() {
        let f = PolarContraction::new(0.5).unwrap();
        assert_eq!(f.eval(&north()), north());
        let x = [FRAC_PI_3.sin(), 0.0, FRAC_PI_3.cos()];
        let y = f.eval(&x);
        assert!((polar_angle(&y) - FRAC_PI_3 / 2.0).abs() < 1e-15);
        assert!(f.domain_margin(&[1.0, 0.0, 0.0]).abs() < 1e-15);
        assert!(PolarContraction::new(-1.0).is_err());
    }

    #[test]
    fn validator_on_constant_and_identity() {
        let c = ConstantMap::new(&UnitVector::axis(2, 0)).unwrap();
        let r = validate_distance_decreasing(&c, 1000, 1).unwrap();
        assert!(r.ok);
        assert_eq!(r.worst_ratio, 0.0);

        let r = validate_distance_decreasing(&IdentityMap, 1000, 1).unwrap();
        assert!(!r.ok);
        assert!((r.worst_ratio - 1.0).abs() < 1e-9);
        assert!(r.witness.is_some());
        assert!(validate_distance_decreasing(&IdentityMap, 0, 1).is_err());
    }

    #[test]
    fn identity_is_rejected_upstream() {
        let err = fibration_from_map(IdentityMap, DomainFactor::First).unwrap_err();
        assert!(matches!(err, Error::NotDistanceDecreasing { .. }));
    }

    #[test]
    fn constant_map_gives_hopf_fibers() {
        let c = ConstantMap::new(&UnitVector::axis(2, 0)).unwrap();
        let fib = fibration_from_map(c, DomainFactor::First).unwrap();
        let mut rng = stream_rng(5, 0);
        for _ in 0..200 {
            let x = random_s2(&mut rng);
            let fiber = fib.fiber(&x).unwrap();
            let p = UnitVector::new(fiber.basis()[0].clone()).unwrap();
            let hopf = complex_hopf_fiber(&p).unwrap();
            assert!(fiber.span_distance(&hopf).unwrap() < 1e-9);
        }
    }

    #[test]
    fn fiber_outside_domain_is_an_error() {
        let f = PolarContraction::new(0.5).unwrap();
        let fib = fibration_from_map(f, DomainFactor::First).unwrap();
        assert!(fib.fiber(&[0.0, 0.0, -1.0]).is_err());
        assert!(fib.fiber(&north()).is_ok());
    }
}
