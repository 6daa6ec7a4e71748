//! Sectional curvature of a surface chart from an orthonormal frame.
//!
//! With `R(X, Y) = ∇_Y ∇_X - ∇_X ∇_Y + ∇_[X,Y]` the curvature is
//! `K = <R(X, Y) X, Y>`, which is `+1` on the unit sphere. When the frame is
//! preserved by a transitive group of local isometries and
//! `[X, Y] = a X + b Y` with constant `a, b`, it reduces to `-a^2 - b^2`.

use crate::error::{Error, Result};

/// Chart coordinates.
pub type Point2 = [f64; 2];
/// Symmetric positive-definite metric coefficients `g_ij`.
pub type Metric2 = [[f64; 2]; 2];

/// `-a^2 - b^2`, the curvature of a homogeneous surface with invariant
/// orthonormal frame satisfying `[X, Y] = a X + b Y`.
pub fn curvature_from_structure_constants(a: f64, b: f64) -> f64 {
    -a * a - b * b
}

type Christoffel = [[[f64; 2]; 2]; 2];

struct Engine<M, F> {
    metric: M,
    frame: F,
    step: f64,
}

impl<M, F> Engine<M, F>
where
    M: Fn(Point2) -> Metric2,
    F: Fn(Point2) -> (Point2, Point2),
{
    fn shifted(p: Point2, axis: usize, t: f64) -> Point2 {
        let mut q = p;
        q[axis] += t;
        q
    }

    /// Central difference of a vector-valued function; `out[i][j] = ∂_j v^i`.
    fn jacobian(&self, p: Point2, v: impl Fn(Point2) -> Point2) -> [[f64; 2]; 2] {
        let s = self.step;
        let mut out = [[0.0; 2]; 2];
        for j in 0..2 {
            let plus = v(Self::shifted(p, j, s));
            let minus = v(Self::shifted(p, j, -s));
            for i in 0..2 {
                out[i][j] = (plus[i] - minus[i]) / (2.0 * s);
            }
        }
        out
    }

    /// `gamma[i][j][k] = Γ^i_jk`.
    fn christoffel(&self, p: Point2) -> Christoffel {
        let s = self.step;
        let mut dg = [[[0.0; 2]; 2]; 2]; // dg[l][a][b] = ∂_l g_ab
        for l in 0..2 {
            let plus = (self.metric)(Self::shifted(p, l, s));
            let minus = (self.metric)(Self::shifted(p, l, -s));
            for a in 0..2 {
                for b in 0..2 {
                    dg[l][a][b] = (plus[a][b] - minus[a][b]) / (2.0 * s);
                }
            }
        }
        let inv = inverse(&(self.metric)(p));
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    gamma[i][j][k] = (0..2)
                        .map(|l| 0.5 * inv[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]))
                        .sum();
                }
            }
        }
        gamma
    }

    /// `∇_u w` at `p` for a vector field `w`.
    fn covariant(&self, p: Point2, u: Point2, w: impl Fn(Point2) -> Point2) -> Point2 {
        let dw = self.jacobian(p, &w);
        let wp = w(p);
        let gamma = self.christoffel(p);
        std::array::from_fn(|i| {
            let mut acc = u[0] * dw[i][0] + u[1] * dw[i][1];
            for j in 0..2 {
                for k in 0..2 {
                    acc += gamma[i][j][k] * u[j] * wp[k];
                }
            }
            acc
        })
    }

    fn x(&self, p: Point2) -> Point2 {
        (self.frame)(p).0
    }

    fn y(&self, p: Point2) -> Point2 {
        (self.frame)(p).1
    }

    fn bracket(&self, p: Point2) -> Point2 {
        let (x, y) = (self.frame)(p);
        let dx = self.jacobian(p, |q| self.x(q));
        let dy = self.jacobian(p, |q| self.y(q));
        std::array::from_fn(|i| x[0] * dy[i][0] + x[1] * dy[i][1] - y[0] * dx[i][0] - y[1] * dx[i][1])
    }

    fn sectional(&self, p: Point2) -> f64 {
        let (x, y) = (self.frame)(p);
        let nabla_x_x = |q: Point2| self.covariant(q, self.x(q), |r| self.x(r));
        let nabla_y_x = |q: Point2| self.covariant(q, self.y(q), |r| self.x(r));
        let first = self.covariant(p, y, nabla_x_x);
        let second = self.covariant(p, x, nabla_y_x);
        let third = self.covariant(p, self.bracket(p), |r| self.x(r));
        let r: Point2 = std::array::from_fn(|i| first[i] - second[i] + third[i]);
        let g = (self.metric)(p);
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| g[i][j] * r[i] * y[j])
            .sum()
    }
}

/// `<R(X, Y) X, Y>` at `p` by nested central differences with step `h`,
/// extrapolated from steps `h` and `h / 2`.
///
/// Fails with [`Error::StepTooLarge`] when the two estimates disagree by more
/// than 1% (relative, floored at 1), which signals that `h` is outside the
/// asymptotic regime.
pub fn numeric_frame_curvature<M, F>(metric: M, frame: F, p: Point2, h: f64) -> Result<f64>
where
    M: Fn(Point2) -> Metric2,
    F: Fn(Point2) -> (Point2, Point2),
{
    check_metric(&metric(p))?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    let at = |step: f64| {
        Engine {
            metric: &metric,
            frame: &frame,
            step,
        }
        .sectional(p)
    };
    let coarse = at(h);
    let fine = at(h / 2.0);
    if !(coarse.is_finite() && fine.is_finite())
        || (coarse - fine).abs() > 1e-2 * fine.abs().max(1.0)
    {
        return Err(Error::StepTooLarge { coarse, fine });
    }
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `(a, b)` with `[X, Y] = a X + b Y` at `p`, by central differences.
pub fn structure_constants<F>(frame: F, p: Point2, h: f64) -> Result<(f64, f64)>
where
    F: Fn(Point2) -> (Point2, Point2),
{
    let engine = Engine {
        metric: |_: Point2| [[1.0, 0.0], [0.0, 1.0]],
        frame: &frame,
        step: h,
    };
    let z = engine.bracket(p);
    let (x, y) = frame(p);
    let det = x[0] * y[1] - x[1] * y[0];
    if det.abs() < 1e-14 {
        return Err(Error::InvalidParameter("frame is degenerate".into()));
    }
    Ok(((z[0] * y[1] - z[1] * y[0]) / det, (x[0] * z[1] - x[1] * z[0]) / det))
}

fn check_metric(g: &Metric2) -> Result<()> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if !(g[0][0] > 0.0 && det > 0.0) || (g[0][1] - g[1][0]).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "metric {g:?} is not symmetric positive-definite"
        )));
    }
    Ok(())
}

fn inverse(g: &Metric2) -> Metric2 {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ]
}

/// Reference charts with orthonormal frames.
pub mod charts {
    use super::{Metric2, Point2};

    pub fn euclidean_metric(_p: Point2) -> Metric2 {
        [[1.0, 0.0], [0.0, 1.0]]
    }

    pub fn coordinate_frame(_p: Point2) -> (Point2, Point2) {
        ([1.0, 0.0], [0.0, 1.0])
    }

    /// `(dx^2 + dy^2) / y^2` on `y > 0`.
    pub fn half_plane_metric(p: Point2) -> Metric2 {
        let w = 1.0 / (p[1] * p[1]);
        [[w, 0.0], [0.0, w]]
    }

    /// `(y ∂x, y ∂y)`, invariant under `z -> a z + b`; `[X, Y] = -X`.
    pub fn half_plane_frame(p: Point2) -> (Point2, Point2) {
        ([p[1], 0.0], [0.0, p[1]])
    }

    /// `dθ^2 + sin^2 θ dφ^2` in coordinates `(θ, φ)`.
    pub fn round_sphere_metric(p: Point2) -> Metric2 {
        let s = p[0].sin();
        [[1.0, 0.0], [0.0, s * s]]
    }

    /// `(∂θ, ∂φ / sin θ)`.
    pub fn round_sphere_frame(p: Point2) -> (Point2, Point2) {
        ([1.0, 0.0], [0.0, 1.0 / p[0].sin()])
    }
}
