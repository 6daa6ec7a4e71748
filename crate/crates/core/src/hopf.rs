//! The complex, quaternionic and octonionic Hopf fibrations.
//!
//! Scalars act on the right. `R^{4m}` is read as `H^m` one block of four
//! coordinates at a time, and the complex structure is right multiplication by
//! `i` on each block: on consecutive coordinate pairs it alternates between
//! `(a, b) -> (-b, a)` and `(a, b) -> (b, -a)`. With this choice every complex
//! Hopf fiber lies inside a quaternionic one, and left multiplication by unit
//! quaternions permutes the fibers of `S^3`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{norm, Octonion, Quaternion, UnitVector, UNIT_TOL};
use crate::error::{Error, Result};
use crate::subspace;

/// Seed of the fixed point set used to sample fibers of dimension above one.
const GRID_SEED: u64 = 0x5eed_f1be;

/// Which division algebra the fibration comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HopfFamily {
    Complex,
    Quaternionic,
    Octonionic,
}

impl HopfFamily {
    pub fn fiber_dim(self) -> usize {
        match self {
            Self::Complex => 1,
            Self::Quaternionic => 3,
            Self::Octonionic => 7,
        }
    }

    /// Whether this family fibers `S^sphere_dim`.
    pub fn supports(self, sphere_dim: usize) -> bool {
        match self {
            Self::Complex => sphere_dim >= 3 && sphere_dim % 2 == 1,
            Self::Quaternionic => sphere_dim % 4 == 3,
            Self::Octonionic => sphere_dim == 15,
        }
    }

    /// The fiber through `x`.
    pub fn fiber(self, x: &UnitVector) -> Result<FiberSampler> {
        match self {
            Self::Complex => complex_hopf_fiber(x),
            Self::Quaternionic => quaternionic_hopf_fiber(x),
            Self::Octonionic => octonionic_hopf_fiber(&octonionic_hopf_projection(x)?),
        }
    }
}

impl std::str::FromStr for HopfFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Self::Complex),
            "quaternionic" => Ok(Self::Quaternionic),
            "octonionic" => Ok(Self::Octonionic),
            other => Err(Error::InvalidParameter(format!("unknown Hopf family {other:?}"))),
        }
    }
}

/// A great `fiber_dim`-sphere in `S^ambient_dim`, given by an orthonormal
/// frame of its linear span.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSampler {
    ambient_dim: usize,
    basis: Vec<Vec<f64>>,
}

impl FiberSampler {
    pub fn from_basis(ambient_dim: usize, basis: Vec<Vec<f64>>) -> Result<Self> {
        if basis.len() < 2 {
            return Err(Error::InvalidParameter("a fiber needs at least two basis vectors".into()));
        }
        if let Some(b) = basis.iter().find(|b| b.len() != ambient_dim + 1) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim + 1,
                found: b.len(),
            });
        }
        subspace::check_orthonormal(&basis)?;
        Ok(Self { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// The point `sum_k t_k basis_k` for a unit parameter `t` on `S^fiber_dim`.
    pub fn sample(&self, t: &[f64]) -> Result<UnitVector> {
        if t.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                found: t.len(),
            });
        }
        let n = norm(t);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(self.combine(t))
    }

    /// `cos(theta) b_0 + sin(theta) b_1`; the whole fiber when it is a circle.
    pub fn sample_angle(&self, theta: f64) -> UnitVector {
        let mut t = vec![0.0; self.basis.len()];
        t[0] = theta.cos();
        t[1] = theta.sin();
        self.combine(&t)
    }

    fn combine(&self, t: &[f64]) -> UnitVector {
        let mut p = vec![0.0; self.ambient_dim + 1];
        for (c, b) in t.iter().zip(&self.basis) {
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi += c * bi;
            }
        }
        UnitVector::normalize(p).expect("orthonormal combination of a unit parameter")
    }

    /// `n` deterministic points on the fiber: equally spaced for circles, a
    /// fixed pseudo-random set for higher-dimensional fibers.
    pub fn grid(&self, n: usize) -> Vec<UnitVector> {
        if self.fiber_dim() == 1 {
            let step = std::f64::consts::TAU / n as f64;
            return (0..n).map(|k| self.sample_angle(k as f64 * step)).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
        (0..n)
            .map(|_| {
                let t = UnitVector::random(self.fiber_dim(), &mut rng);
                self.combine(t.coords())
            })
            .collect()
    }

    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        subspace::project(&self.basis, p)
    }

    /// Euclidean distance from `p` to the linear span of the fiber.
    pub fn residual(&self, p: &[f64]) -> f64 {
        subspace::rejection_norm(&self.basis, p)
    }

    /// Geodesic distance from the sphere point `p` to the fiber.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        subspace::angle_to_span(&self.basis, p)
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        p.len() == self.ambient_dim + 1 && self.residual(p) <= tol
    }

    /// Largest entry of the difference of the two span projectors.
    pub fn span_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_ambient(other)?;
        Ok(subspace::projector_distance(
            &self.basis,
            &other.basis,
            self.ambient_dim + 1,
        ))
    }

    pub fn smallest_principal_angle(&self, other: &Self) -> Result<f64> {
        self.check_same_ambient(other)?;
        subspace::smallest_principal_angle(&self.basis, &other.basis)
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Right multiplication by `i`, block by block.
pub fn complex_structure(x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for (k, (pair, img)) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        if k % 2 == 0 {
            img[0] = -b;
            img[1] = a;
        } else {
            img[0] = b;
            img[1] = -a;
        }
    }
    out
}

/// `x q` with `q` acting on the right of every quaternion coordinate.
pub fn right_scalar_mul(x: &[f64], q: Quaternion) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for k in (0..x.len()).step_by(4) {
        (Quaternion::from_slice(x, k) * q).write_to(&mut out, k);
    }
    out
}

/// Great circle `{cos(t) x + sin(t) ix}` through `x` in `S^{2n+1}`.
pub fn complex_hopf_fiber(x: &UnitVector) -> Result<FiberSampler> {
    if !HopfFamily::Complex.supports(x.dim()) {
        return Err(Error::InvalidParameter(format!(
            "complex Hopf fibration needs an odd sphere of dimension >= 3, got S^{}",
            x.dim()
        )));
    }
    let ix = complex_structure(x.coords());
    FiberSampler::from_basis(x.dim(), vec![x.coords().to_vec(), ix])
}

/// Great 3-sphere `{x q : |q| = 1}` through `x` in `S^{4n+3}`.
pub fn quaternionic_hopf_fiber(x: &UnitVector) -> Result<FiberSampler> {
    if !HopfFamily::Quaternionic.supports(x.dim()) {
        return Err(Error::InvalidParameter(format!(
            "quaternionic Hopf fibration needs a sphere of dimension 4n+3, got S^{}",
            x.dim()
        )));
    }
    let c = x.coords();
    let basis = vec![
        c.to_vec(),
        right_scalar_mul(c, Quaternion::I),
        right_scalar_mul(c, Quaternion::J),
        right_scalar_mul(c, Quaternion::K),
    ];
    FiberSampler::from_basis(x.dim(), basis)
}

/// Base space of a Hopf fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    ComplexProjective,
    QuaternionicProjective,
    Sphere8,
}

/// A point of the base. Projective points are stored as any unit
/// representative; two of them are equal when they span the same line.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePoint {
    kind: BaseKind,
    representative: Vec<f64>,
}

impl BasePoint {
    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn representative(&self) -> &[f64] {
        &self.representative
    }

    /// Discrepancy between two base points: the projector distance of the
    /// lines for projective kinds, the coordinate distance on `S^8`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.kind != other.kind {
            return Err(Error::InvalidParameter(format!(
                "cannot compare {:?} with {:?}",
                self.kind, other.kind
            )));
        }
        if self.representative.len() != other.representative.len() {
            return Err(Error::DimensionMismatch {
                expected: self.representative.len(),
                found: other.representative.len(),
            });
        }
        Ok(match self.kind {
            BaseKind::Sphere8 => norm(
                &self
                    .representative
                    .iter()
                    .zip(&other.representative)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            ),
            _ => {
                let n = self.representative.len();
                subspace::projector_distance(&self.line(), &other.line(), n)
            }
        })
    }

    /// Equality up to `tol` (1e-9 is the usual choice).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other).is_ok_and(|d| d <= tol)
    }

    fn line(&self) -> Vec<Vec<f64>> {
        let x = UnitVector::new(self.representative.clone()).expect("unit representative");
        let fiber = match self.kind {
            BaseKind::ComplexProjective => complex_hopf_fiber(&x),
            BaseKind::QuaternionicProjective => quaternionic_hopf_fiber(&x),
            BaseKind::Sphere8 => unreachable!("S^8 points are not projective"),
        };
        fiber.expect("validated representative").basis
    }
}

/// The point of `CP^n` under `x`.
pub fn complex_hopf_projection(x: &UnitVector) -> Result<BasePoint> {
    complex_hopf_fiber(x)?;
    Ok(BasePoint {
        kind: BaseKind::ComplexProjective,
        representative: x.coords().to_vec(),
    })
}

/// The point of `HP^n` under `x`.
pub fn quaternionic_hopf_projection(x: &UnitVector) -> Result<BasePoint> {
    quaternionic_hopf_fiber(x)?;
    Ok(BasePoint {
        kind: BaseKind::QuaternionicProjective,
        representative: x.coords().to_vec(),
    })
}

/// `(a, b) -> (2 a conj(b), |a|^2 - |b|^2)` from `S^15` to `S^8`.
pub fn octonionic_hopf_map(a: Octonion, b: Octonion) -> Result<BasePoint> {
    let total = a.norm_sqr() + b.norm_sqr();
    if !total.is_finite() || (total - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm: total.sqrt() });
    }
    let mut rep = vec![0.0; 9];
    (a * b.conj()).scale(2.0).write_to(&mut rep, 0);
    rep[8] = a.norm_sqr() - b.norm_sqr();
    Ok(BasePoint {
        kind: BaseKind::Sphere8,
        representative: rep,
    })
}

/// [`octonionic_hopf_map`] on a point of `S^15`, split as `(a, b)`.
pub fn octonionic_hopf_projection(x: &UnitVector) -> Result<BasePoint> {
    if x.dim() != 15 {
        return Err(Error::DimensionMismatch {
            expected: 15,
            found: x.dim(),
        });
    }
    let c = x.coords();
    octonionic_hopf_map(Octonion::from_slice(c, 0), Octonion::from_slice(c, 8))
}

/// A point of `S^8` viewed as a base point of the octonionic fibration.
pub fn sphere8_point(p: &UnitVector) -> Result<BasePoint> {
    if p.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: p.dim(),
        });
    }
    Ok(BasePoint {
        kind: BaseKind::Sphere8,
        representative: p.coords().to_vec(),
    })
}

/// The great 7-sphere over `p = (2cs w, c^2 - s^2)` in `S^15`:
/// `{(c u, s conj(w) u) : |u| = 1}`, with the coordinate `O`-axis spheres
/// over the poles.
pub fn octonionic_hopf_fiber(p: &BasePoint) -> Result<FiberSampler> {
    if p.kind != BaseKind::Sphere8 {
        return Err(Error::InvalidParameter(
            "octonionic fibers live over S^8 base points".into(),
        ));
    }
    let rep = &p.representative;
    let height = rep[8].clamp(-1.0, 1.0);
    let c = ((1.0 + height) / 2.0).sqrt();
    let s = ((1.0 - height) / 2.0).sqrt();
    let y = Octonion::from_slice(rep, 0);
    // w is only defined off the poles; there s = 0 or c = 0 kills its term.
    let w = if 2.0 * c * s > 1e-300 {
        y.scale(1.0 / (2.0 * c * s)).normalize().unwrap_or(Octonion::ONE)
    } else {
        Octonion::ONE
    };
    let w_bar = w.conj();
    let basis = (0..8)
        .map(|k| {
            let u = Octonion::basis(k);
            let mut v = vec![0.0; 16];
            u.scale(c).write_to(&mut v, 0);
            (w_bar * u).scale(s).write_to(&mut v, 8);
            v
        })
        .collect::<Vec<_>>();
    // Re-orthonormalize away the rounding in w.
    let basis = subspace::gram_schmidt(&basis);
    FiberSampler::from_basis(15, basis)
}

/// Distances between two fibers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberDistance {
    /// Smallest distance from a sampled point of `F` to `G`.
    pub min: f64,
    /// Largest distance from a sampled point of `F` to `G`.
    pub max_over_basepoints: f64,
}

impl FiberDistance {
    /// Zero for parallel fibers.
    pub fn spread(&self) -> f64 {
        self.max_over_basepoints - self.min
    }
}

/// Pointwise distances from a `grid` of points of `f` to the fiber `g`.
///
/// The inner minimization over `g` is exact: the nearest point of a great
/// subsphere is the normalized orthogonal projection.
pub fn fiber_distance(f: &FiberSampler, g: &FiberSampler, grid: usize) -> Result<FiberDistance> {
    if grid < 16 {
        return Err(Error::InvalidParameter(format!("grid must be >= 16, got {grid}")));
    }
    f.check_same_ambient(g)?;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in f.grid(grid) {
        let d = g.distance_to(p.coords());
        min = min.min(d);
        max = max.max(d);
    }
    Ok(FiberDistance {
        min,
        max_over_basepoints: max,
    })
}

/// Stereographic projection from `(0, ..., 0, 1)`; `None` at the pole.
pub fn stereographic_projection(p: &[f64]) -> Option<Vec<f64>> {
    let (last, head) = p.split_last()?;
    let denom = 1.0 - last;
    if denom <= 1e-12 {
        return None;
    }
    Some(head.iter().map(|x| x / denom).collect())
}
