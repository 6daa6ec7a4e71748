//! Numerical differentials of maps of `S^2`, their singular-value ellipses,
//! and the tests built on them.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::SphereMap;
use crate::error::{Error, Result};

/// Finite-difference step for [`differential`].
pub const DEFAULT_STEP: f64 = 1e-5;

/// Allowed spread of the singular values over a scan.
pub const HOMOGENEITY_TOL: f64 = 1e-3;

/// An orthonormal frame `(e1, e2)` of the tangent plane at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentFrame2 {
    pub base: [f64; 3],
    pub e1: [f64; 3],
    pub e2: [f64; 3],
}

impl TangentFrame2 {
    /// The deterministic frame at `x`: `e1` is the normalized tangential part
    /// of the north axis, or of the first axis when `|x_3| > 0.99`, and
    /// `e2 = x × e1`.
    pub fn at(x: &[f64; 3]) -> Self {
        let axis = if x[2].abs() > 0.99 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let c = dot(&axis, x);
        let t = [axis[0] - c * x[0], axis[1] - c * x[1], axis[2] - c * x[2]];
        let n = dot(&t, &t).sqrt();
        let e1 = t.map(|v| v / n);
        let e2 = cross(x, &e1);
        Self { base: *x, e1, e2 }
    }

    /// The frame turned by `angle` inside the tangent plane.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            base: self.base,
            e1: std::array::from_fn(|k| c * self.e1[k] + s * self.e2[k]),
            e2: std::array::from_fn(|k| -s * self.e1[k] + c * self.e2[k]),
        }
    }

    /// `exp_base(t (cos(phi) e1 + sin(phi) e2))`.
    pub fn exp(&self, t: f64, phi: f64) -> [f64; 3] {
        let (sp, cp) = phi.sin_cos();
        let dir: [f64; 3] = std::array::from_fn(|k| cp * self.e1[k] + sp * self.e2[k]);
        let (st, ct) = t.sin_cos();
        let p: [f64; 3] = std::array::from_fn(|k| ct * self.base[k] + st * dir[k]);
        let n = dot(&p, &p).sqrt();
        p.map(|v| v / n)
    }

    /// Components of a tangent vector in this frame.
    pub fn coordinates(&self, v: &[f64; 3]) -> [f64; 2] {
        [dot(v, &self.e1), dot(v, &self.e2)]
    }
}

/// `df_x` as a 2x2 matrix, in the default frames at `x` and `f(x)`.
pub fn differential<M: SphereMap + ?Sized>(f: &M, x: &[f64; 3], h: f64) -> Result<[[f64; 2]; 2]> {
    let fx = f.eval(x);
    differential_in_frames(f, &TangentFrame2::at(x), &TangentFrame2::at(&fx), h)
}

/// `df_x` in the given frames, by central differences along geodesics with
/// one Richardson extrapolation step (`h` and `h / 2`).
pub fn differential_in_frames<M: SphereMap + ?Sized>(
    f: &M,
    source: &TangentFrame2,
    target: &TangentFrame2,
    h: f64,
) -> Result<[[f64; 2]; 2]> {
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let margin = f.domain_margin(&source.base);
    if !(margin > h) {
        return Err(Error::NearBoundary { margin, step: h });
    }
    let central = |step: f64| -> [[f64; 2]; 2] {
        let mut d = [[0.0; 2]; 2];
        for (col, phi) in [0.0, std::f64::consts::FRAC_PI_2].into_iter().enumerate() {
            let plus = f.eval(&source.exp(step, phi));
            let minus = f.eval(&source.exp(-step, phi));
            let diff: [f64; 3] = std::array::from_fn(|k| (plus[k] - minus[k]) / (2.0 * step));
            let c = target.coordinates(&diff);
            d[0][col] = c[0];
            d[1][col] = c[1];
        }
        d
    };
    let coarse = central(h);
    let fine = central(h / 2.0);
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| (4.0 * fine[i][j] - coarse[i][j]) / 3.0)
    }))
}

/// The image of the unit circle under a linear map of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseData {
    pub sigma_major: f64,
    pub sigma_minor: f64,
    /// Unit preimages of the major and minor axes.
    pub axes: [[f64; 2]; 2],
}

impl EllipseData {
    pub fn is_circle(&self, tol: f64) -> bool {
        self.sigma_major - self.sigma_minor <= tol
    }
}

/// Singular value decomposition of `df`; the axes are its right singular
/// vectors.
pub fn ellipse(df: &[[f64; 2]; 2]) -> EllipseData {
    let m = Matrix2::new(df[0][0], df[0][1], df[1][0], df[1][1]);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let (s0, s1) = (svd.singular_values[0], svd.singular_values[1]);
    let row = |k: usize| [v_t[(k, 0)], v_t[(k, 1)]];
    if s0 >= s1 {
        EllipseData {
            sigma_major: s0,
            sigma_minor: s1,
            axes: [row(0), row(1)],
        }
    } else {
        EllipseData {
            sigma_major: s1,
            sigma_minor: s0,
            axes: [row(1), row(0)],
        }
    }
}

/// Outcome of [`homogeneity_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    /// Whether both singular values are constant to [`HOMOGENEITY_TOL`].
    /// `false` certifies that the fibration is not locally fiberwise
    /// homogeneous.
    pub constant_axes: bool,
    /// `(sigma_major, sigma_minor)` at each sample point.
    pub sigma_field: Vec<(f64, f64)>,
    /// `max - min` of each singular value over the samples.
    pub spread: (f64, f64),
}

/// Computes the ellipse of `df` at every point and checks that its axes do
/// not change.
pub fn homogeneity_scan<M: SphereMap + ?Sized>(f: &M, points: &[[f64; 3]]) -> Result<HomogeneityReport> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no sample points".into()));
    }
    let sigma_field = points
        .iter()
        .map(|x| {
            let e = ellipse(&differential(f, x, DEFAULT_STEP)?);
            Ok((e.sigma_major, e.sigma_minor))
        })
        .collect::<Result<Vec<_>>>()?;
    let range = |pick: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = sigma_field
            .iter()
            .map(pick)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    };
    let spread = (range(|s| s.0), range(|s| s.1));
    Ok(HomogeneityReport {
        constant_axes: spread.0 < HOMOGENEITY_TOL && spread.1 < HOMOGENEITY_TOL,
        sigma_field,
        spread,
    })
}

/// Where a map whose differential sends unit circles to circles of one fixed
/// radius `r` ends up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundVerdict {
    /// `r = 0`: the map is constant and the fibration is Hopf.
    Hopf,
    /// `r = 1`: all distances are preserved, so the map is not
    /// distance-decreasing.
    DistancePreservingExcluded,
    /// `0 < r < 1`: the image would have curvature `1 / r^2 > 1` inside the
    /// unit sphere.
    CurvatureExcluded,
}

/// The trichotomy on the circle radius `r`, with [`HOMOGENEITY_TOL`] as the
/// numerical width of the two endpoints.
pub fn classify_round_radius(r: f64) -> Result<RoundVerdict> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::ClassifierPrecondition(format!("radius {r}")));
    }
    if r < HOMOGENEITY_TOL {
        Ok(RoundVerdict::Hopf)
    } else if (r - 1.0).abs() <= HOMOGENEITY_TOL {
        Ok(RoundVerdict::DistancePreservingExcluded)
    } else if r < 1.0 {
        Ok(RoundVerdict::CurvatureExcluded)
    } else {
        Err(Error::ClassifierPrecondition(format!(
            "radius {r} > 1: the map expands distances"
        )))
    }
}

/// Runs [`homogeneity_scan`], requires a constant circular ellipse field and
/// classifies its radius.
pub fn round_map_classifier<M: SphereMap + ?Sized>(f: &M, points: &[[f64; 3]]) -> Result<RoundVerdict> {
    let scan = homogeneity_scan(f, points)?;
    if !scan.constant_axes {
        return Err(Error::ClassifierPrecondition(format!(
            "singular values vary by {:?}",
            scan.spread
        )));
    }
    let n = scan.sigma_field.len() as f64;
    let mut mean = 0.0;
    for &(major, minor) in &scan.sigma_field {
        if major - minor > HOMOGENEITY_TOL {
            return Err(Error::ClassifierPrecondition(format!(
                "ellipse with axes {major} and {minor} is not a circle"
            )));
        }
        mean += (major + minor) / (2.0 * n);
    }
    classify_round_radius(mean)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
