//! Oriented 2-planes of R^4 and the identification `G_2 R^4 = S^2 x S^2`.
//!
//! A plane `span(u, v)` is sent to its unit bivector `u ∧ v`, which splits
//! into self-dual and anti-self-dual halves (Hodge star for the orientation
//! `e1 e2 e3 e4`). The orthonormal bases used are
//!
//! ```text
//! self-dual:       (e12 + e34, e13 - e24, e14 + e23) / sqrt 2
//! anti-self-dual:  (e12 - e34, e13 + e24, e14 - e23) / sqrt 2
//! ```
//!
//! and `xi_plus`, `xi_minus` are `sqrt 2` times the coordinates of the two
//! halves. For a decomposable unit bivector both are unit vectors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{angle_between, IsometrySO4, UnitVector, UNIT_TOL};
use crate::error::{Error, Result};

pub type Matrix3 = [[f64; 3]; 3];
pub type Matrix4 = [[f64; 4]; 4];

/// Bivector coordinates in the order `e12, e13, e14, e23, e24, e34`.
pub type Bivector = [f64; 6];

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// An oriented 2-plane through the origin of R^4, given by an ordered
/// orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane2 {
    u: [f64; 4],
    v: [f64; 4],
}

impl OrientedPlane2 {
    /// Requires `(u, v)` orthonormal to within [`UNIT_TOL`].
    pub fn new(u: [f64; 4], v: [f64; 4]) -> Result<Self> {
        let residual = (dot4(&u, &u) - 1.0)
            .abs()
            .max((dot4(&v, &v) - 1.0).abs())
            .max(dot4(&u, &v).abs());
        if !(residual <= UNIT_TOL) {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { u, v })
    }

    /// Gram-Schmidt on `(a, b)`, keeping the orientation of `a ∧ b`.
    pub fn from_span(a: [f64; 4], b: [f64; 4]) -> Result<Self> {
        let na = dot4(&a, &a).sqrt();
        if !(na > 1e-12) {
            return Err(Error::NotOrthonormal { residual: 1.0 });
        }
        let u = a.map(|x| x / na);
        let c = dot4(&u, &b);
        let w: [f64; 4] = std::array::from_fn(|k| b[k] - c * u[k]);
        let nw = dot4(&w, &w).sqrt();
        if !(nw > 1e-12 * dot4(&b, &b).sqrt().max(1.0)) {
            return Err(Error::NotOrthonormal { residual: 1.0 });
        }
        Self::new(u, w.map(|x| x / nw))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let a = UnitVector::random(3, rng);
            let b = UnitVector::random(3, rng);
            let a: [f64; 4] = a.coords().try_into().expect("S^3 point");
            let b: [f64; 4] = b.coords().try_into().expect("S^3 point");
            if let Ok(p) = Self::from_span(a, b) {
                return p;
            }
        }
    }

    pub fn u(&self) -> [f64; 4] {
        self.u
    }

    pub fn v(&self) -> [f64; 4] {
        self.v
    }

    /// The basis as a frame for the [`crate::subspace`] helpers.
    pub fn frame(&self) -> Vec<Vec<f64>> {
        vec![self.u.to_vec(), self.v.to_vec()]
    }

    pub fn reversed(&self) -> Self {
        Self {
            u: self.v,
            v: self.u,
        }
    }

    pub fn bivector(&self) -> Bivector {
        PAIRS.map(|(i, j)| self.u[i] * self.v[j] - self.u[j] * self.v[i])
    }

    pub fn projector(&self) -> Matrix4 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.u[i] * self.u[j] + self.v[i] * self.v[j]))
    }

    /// Largest entry of the difference of the two projectors (ignores
    /// orientation).
    pub fn projector_distance(&self, other: &Self) -> f64 {
        let (a, b) = (self.projector(), other.projector());
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((a[i][j] - b[i][j]).abs());
            }
        }
        worst
    }

    /// The image plane `(g u, g v)`.
    pub fn transform(&self, g: &IsometrySO4) -> Self {
        Self {
            u: g.apply_array(self.u),
            v: g.apply_array(self.v),
        }
    }
}

/// A point of `S^2 x S^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    xi_plus: [f64; 3],
    xi_minus: [f64; 3],
}

impl ModuliPoint {
    pub fn new(xi_plus: &UnitVector, xi_minus: &UnitVector) -> Result<Self> {
        Ok(Self {
            xi_plus: xi_plus.to_array3()?,
            xi_minus: xi_minus.to_array3()?,
        })
    }

    /// Requires both factors unit to within [`UNIT_TOL`].
    pub fn from_arrays(xi_plus: [f64; 3], xi_minus: [f64; 3]) -> Result<Self> {
        for xi in [xi_plus, xi_minus] {
            let n = dot3(&xi, &xi).sqrt();
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit { norm: n });
            }
        }
        Ok(Self { xi_plus, xi_minus })
    }

    pub fn xi_plus(&self) -> [f64; 3] {
        self.xi_plus
    }

    pub fn xi_minus(&self) -> [f64; 3] {
        self.xi_minus
    }

    /// Product-metric distance `sqrt(d_+^2 + d_-^2)`.
    pub fn distance(&self, other: &Self) -> f64 {
        let dp = angle_between(&self.xi_plus, &other.xi_plus);
        let dm = angle_between(&self.xi_minus, &other.xi_minus);
        dp.hypot(dm)
    }
}

/// Splits the unit bivector of `plane` into `(xi_plus, xi_minus)`.
pub fn plane_to_moduli(plane: &OrientedPlane2) -> ModuliPoint {
    let (xi_plus, xi_minus) = split_bivector(&plane.bivector());
    ModuliPoint { xi_plus, xi_minus }
}

/// `sqrt 2` times the self-dual and anti-self-dual coordinates.
pub fn split_bivector(w: &Bivector) -> ([f64; 3], [f64; 3]) {
    let [w12, w13, w14, w23, w24, w34] = *w;
    (
        [w12 + w34, w13 - w24, w14 + w23],
        [w12 - w34, w13 + w24, w14 - w23],
    )
}

/// Inverse of [`split_bivector`].
pub fn join_bivector(xi_plus: &[f64; 3], xi_minus: &[f64; 3]) -> Bivector {
    let (p, m) = (xi_plus, xi_minus);
    [
        (p[0] + m[0]) / 2.0,
        (p[1] + m[1]) / 2.0,
        (p[2] + m[2]) / 2.0,
        (p[2] - m[2]) / 2.0,
        (m[1] - p[1]) / 2.0,
        (p[0] - m[0]) / 2.0,
    ]
}

pub fn bivector_to_skew(w: &Bivector) -> Matrix4 {
    let mut a = [[0.0; 4]; 4];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        a[i][j] = w[k];
        a[j][i] = -w[k];
    }
    a
}

fn skew_to_bivector(a: &Matrix4) -> Bivector {
    PAIRS.map(|(i, j)| a[i][j])
}

/// Factors the decomposable unit bivector `(xi_plus, xi_minus)` into an
/// oriented orthonormal pair.
///
/// For `A = u v^T - v u^T` the projector onto the plane is `-A^2` and
/// `v = -A u`; `u` is the normalized column of `-A^2` with the largest
/// diagonal entry.
pub fn moduli_to_plane(m: &ModuliPoint) -> Result<OrientedPlane2> {
    let w = join_bivector(&m.xi_plus, &m.xi_minus);
    let a = bivector_to_skew(&w);
    let a2 = mat4_mul(&a, &a);
    let proj: Matrix4 = std::array::from_fn(|i| std::array::from_fn(|j| -a2[i][j]));
    let col = (0..4)
        .max_by(|&i, &j| proj[i][i].total_cmp(&proj[j][j]))
        .expect("four columns");
    let c: [f64; 4] = std::array::from_fn(|i| proj[i][col]);
    let nc = dot4(&c, &c).sqrt();
    if !(nc > 1e-6) {
        return Err(Error::Reconstruction { residual: 1.0 });
    }
    let u = c.map(|x| x / nc);
    let au = mat4_apply(&a, &u);
    let v = au.map(|x| -x);
    let nv = dot4(&v, &v).sqrt();
    let v = v.map(|x| x / nv);
    let plane = OrientedPlane2 { u, v };
    let back = plane.bivector();
    let residual = back
        .iter()
        .zip(&w)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if !(residual <= UNIT_TOL) {
        return Err(Error::Reconstruction { residual });
    }
    OrientedPlane2::new(u, v)
}

/// The pair of rotations `(R_plus, R_minus)` with
/// `plane_to_moduli(g P) = (R_plus xi_plus, R_minus xi_minus)`.
pub fn so4_to_so3xso3(g: &IsometrySO4) -> (Matrix3, Matrix3) {
    let m = g.matrix();
    let mt = transpose4(&m);
    let push = |xi_plus: [f64; 3], xi_minus: [f64; 3]| {
        let a = bivector_to_skew(&join_bivector(&xi_plus, &xi_minus));
        let img = mat4_mul(&mat4_mul(&m, &a), &mt);
        split_bivector(&skew_to_bivector(&img))
    };
    let mut r_plus = [[0.0; 3]; 3];
    let mut r_minus = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        let (p, _) = push(e, [0.0; 3]);
        let (_, q) = push([0.0; 3], e);
        for row in 0..3 {
            r_plus[row][k] = p[row];
            r_minus[row][k] = q[row];
        }
    }
    (r_plus, r_minus)
}

pub fn mat3_apply(r: &Matrix3, x: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| r[i][0] * x[0] + r[i][1] * x[1] + r[i][2] * x[2])
}

pub fn mat3_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat3_max_diff(a: &Matrix3, b: &Matrix3) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}

pub const IDENTITY3: Matrix3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn mat4_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn mat4_apply(a: &Matrix4, x: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|k| a[i][k] * x[k]).sum())
}

fn transpose4(a: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
