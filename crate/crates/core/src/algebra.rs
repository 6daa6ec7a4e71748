//! Normed division algebras, points on round spheres and rotations of R^4.
//!
//! Quaternions follow the Hamilton convention (`ij = k`). Octonions are built
//! by Cayley-Dickson doubling of quaternion pairs with
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`, so that `e1 e2 = e3`
//! and `e_{k+4} = e_k e_4` for `k = 1, 2, 3`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on unit-norm and orthonormality preconditions.
pub const UNIT_TOL: f64 = 1e-9;

/// A real quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Reads the quaternion stored at `v[offset..offset + 4]`.
    pub fn from_slice(v: &[f64], offset: usize) -> Self {
        Self::new(v[offset], v[offset + 1], v[offset + 2], v[offset + 3])
    }

    pub fn write_to(self, v: &mut [f64], offset: usize) {
        v[offset..offset + 4].copy_from_slice(&self.to_array());
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Returns `self / |self|`, or `None` for the zero quaternion.
    pub fn normalize(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        (n2 > 0.0).then(|| self.conj().scale(1.0 / n2))
    }

    /// The rotation of the imaginary quaternions `v -> q v conj(q)`, for unit `q`.
    pub fn to_rotation_matrix(self) -> [[f64; 3]; 3] {
        let Self { w, x, y, z } = self;
        [
            [
                w * w + x * x - y * y - z * z,
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                w * w - x * x + y * y - z * z,
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                w * w - x * x - y * y + z * z,
            ],
        ]
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        quat_mul(self, o)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// Hamilton product.
pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

/// `v -> q v` on R^4 = H.
pub fn left_mul(q: Quaternion, v: Quaternion) -> Quaternion {
    q * v
}

/// `v -> v q` on R^4 = H.
pub fn right_mul(v: Quaternion, q: Quaternion) -> Quaternion {
    v * q
}

/// An octonion stored as a Cayley-Dickson pair of quaternions. Coordinates
/// over `e0..e7` are `(a.w, a.x, a.y, a.z, b.w, b.x, b.y, b.z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Octonion {
    pub a: Quaternion,
    pub b: Quaternion,
}

impl Octonion {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);

    pub const fn new(a: Quaternion, b: Quaternion) -> Self {
        Self { a, b }
    }

    /// The basis element `e_k`, `k < 8`.
    pub fn basis(k: usize) -> Self {
        assert!(k < 8, "octonion basis index {k} out of range");
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Self::from_array(c)
    }

    pub fn from_real(r: f64) -> Self {
        Self::new(Quaternion::new(r, 0.0, 0.0, 0.0), Quaternion::ZERO)
    }

    pub fn from_array(c: [f64; 8]) -> Self {
        Self::from_slice(&c, 0)
    }

    pub fn from_slice(v: &[f64], offset: usize) -> Self {
        Self::new(
            Quaternion::from_slice(v, offset),
            Quaternion::from_slice(v, offset + 4),
        )
    }

    pub fn to_array(self) -> [f64; 8] {
        let mut c = [0.0; 8];
        self.write_to(&mut c, 0);
        c
    }

    pub fn write_to(self, v: &mut [f64], offset: usize) {
        self.a.write_to(v, offset);
        self.b.write_to(v, offset + 4);
    }

    pub fn conj(self) -> Self {
        Self::new(self.a.conj(), -self.b)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a.scale(s), self.b.scale(s))
    }

    pub fn normalize(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }
}

impl Add for Octonion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Octonion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Octonion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul for Octonion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        oct_mul(self, o)
    }
}

/// Cayley-Dickson product `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
pub fn oct_mul(x: Octonion, y: Octonion) -> Octonion {
    let (a, b) = (x.a, x.b);
    let (c, d) = (y.a, y.b);
    Octonion::new(a * c - d.conj() * b, d * a + b * c.conj())
}

/// A point of the round sphere `S^dim`, stored as `dim + 1` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Wraps `coords`, requiring unit norm to within [`UNIT_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a sphere point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let n = norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self { coords })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalize(mut coords: Vec<f64>) -> Result<Self> {
        let n = norm(&coords);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotUnit { norm: n });
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Self::new(coords)
    }

    /// The `k`-th coordinate vector of `S^dim`.
    pub fn axis(dim: usize, k: usize) -> Self {
        let mut coords = vec![0.0; dim + 1];
        coords[k] = 1.0;
        Self { coords }
    }

    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        Self::new(q.to_array().to_vec())
    }

    /// Uniform sample from `S^dim`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let coords: Vec<f64> = (0..=dim).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(u) = Self::normalize(coords) {
                return u;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Reinterprets a point of `S^3` as a quaternion.
    pub fn to_quaternion(&self) -> Result<Quaternion> {
        if self.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: self.dim(),
            });
        }
        Ok(Quaternion::from_slice(&self.coords, 0))
    }

    pub fn to_array3(&self) -> Result<[f64; 3]> {
        match self.coords[..] {
            [a, b, c] => Ok([a, b, c]),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            }),
        }
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Great-circle distance between two points of the same sphere, in radians.
pub fn sphere_geodesic_distance(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(angle_between(x.coords(), y.coords()))
}

/// Angle between two unit vectors, `2 atan2(|x - y|, |x + y|)`.
///
/// Equal to `arccos <x, y>` but keeps full relative precision for nearly
/// equal and nearly antipodal points.
pub fn angle_between(x: &[f64], y: &[f64]) -> f64 {
    let (mut d2, mut s2) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        d2 += (a - b) * (a - b);
        s2 += (a + b) * (a + b);
    }
    2.0 * d2.sqrt().atan2(s2.sqrt())
}

/// A rotation of R^4 = H acting by `v -> left * v * conj(right)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometrySO4 {
    left: Quaternion,
    right: Quaternion,
}

impl IsometrySO4 {
    pub const IDENTITY: Self = Self {
        left: Quaternion::ONE,
        right: Quaternion::ONE,
    };

    pub fn new(left: Quaternion, right: Quaternion) -> Result<Self> {
        for q in [left, right] {
            let n = q.norm();
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit { norm: n });
            }
        }
        Ok(Self { left, right })
    }

    /// Pure left multiplication `v -> q v`.
    pub fn left_multiplication(q: Quaternion) -> Result<Self> {
        Self::new(q, Quaternion::ONE)
    }

    /// Pure right multiplication `v -> v q`.
    pub fn right_multiplication(q: Quaternion) -> Result<Self> {
        Self::new(Quaternion::ONE, q.conj())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            left: haar_unit_quaternion(rng),
            right: haar_unit_quaternion(rng),
        }
    }

    pub fn left(&self) -> Quaternion {
        self.left
    }

    pub fn right(&self) -> Quaternion {
        self.right
    }

    pub fn apply_quaternion(&self, v: Quaternion) -> Quaternion {
        self.left * v * self.right.conj()
    }

    pub fn apply_array(&self, v: [f64; 4]) -> [f64; 4] {
        self.apply_quaternion(Quaternion::from_array(v)).to_array()
    }

    /// Applies the rotation to a point of `S^3`.
    pub fn apply(&self, v: &UnitVector) -> Result<UnitVector> {
        let q = v.to_quaternion()?;
        Ok(UnitVector {
            coords: self.apply_quaternion(q).to_array().to_vec(),
        })
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            left: self.left * other.left,
            right: self.right * other.right,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            left: self.left.conj(),
            right: self.right.conj(),
        }
    }

    /// The 4x4 orthogonal matrix, row-major.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for col in 0..4 {
            let mut e = [0.0; 4];
            e[col] = 1.0;
            let img = self.apply_array(e);
            for row in 0..4 {
                m[row][col] = img[row];
            }
        }
        m
    }
}

/// `left * v * conj(right)` for a point `v` of `S^3`.
pub fn rot4_apply(g: &IsometrySO4, v: &UnitVector) -> Result<UnitVector> {
    g.apply(v)
}

/// Haar-uniform unit quaternion from a normalized 4-dimensional Gaussian.
pub fn haar_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if let Some(u) = q.normalize() {
            return u;
        }
    }
}

/// Uniform unit octonion.
pub fn random_unit_octonion<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    let u = UnitVector::random(7, rng);
    Octonion::from_slice(u.coords(), 0)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
