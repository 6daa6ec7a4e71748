//! Orthonormal frames of linear subspaces of R^n: projections, projectors and
//! principal angles.

use nalgebra::DMatrix;

use crate::algebra::{dot, norm, UNIT_TOL};
use crate::error::{Error, Result};

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_residual(basis: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(u, v) - target).abs());
        }
    }
    worst
}

pub fn check_orthonormal(basis: &[Vec<f64>]) -> Result<()> {
    let residual = orthonormality_residual(basis);
    if !(residual <= UNIT_TOL) {
        return Err(Error::NotOrthonormal { residual });
    }
    Ok(())
}

/// Orthogonal projection of `p` onto the span of an orthonormal `basis`.
pub fn project(basis: &[Vec<f64>], p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for b in basis {
        let c = dot(b, p);
        for (o, bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    out
}

/// `|p - P p|` for the projector `P` onto the span of `basis`.
pub fn rejection_norm(basis: &[Vec<f64>], p: &[f64]) -> f64 {
    let proj = project(basis, p);
    p.iter()
        .zip(&proj)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Angle between the unit vector `p` and the great subsphere cut out by the
/// span of `basis`.
pub fn angle_to_span(basis: &[Vec<f64>], p: &[f64]) -> f64 {
    let proj = project(basis, p);
    let along = norm(&proj);
    let across = p
        .iter()
        .zip(&proj)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    across.atan2(along)
}

pub fn projector(basis: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for b in basis {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += b[i] * b[j];
            }
        }
    }
    m
}

/// Largest entry of `|P_a - P_b|`; zero iff the spans agree.
pub fn projector_distance(a: &[Vec<f64>], b: &[Vec<f64>], n: usize) -> f64 {
    (projector(a, n) - projector(b, n)).amax()
}

fn frame_matrix(basis: &[Vec<f64>], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i])
}

/// Smallest principal angle between two subspaces given by orthonormal
/// frames of the same ambient dimension.
///
/// Computed as `atan2(sin, cos)` with the cosine from the singular values of
/// `A^T B` and the sine from those of `(I - P_A) B`, so tiny angles keep their
/// relative accuracy.
pub fn smallest_principal_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    let n = a.first().map_or(0, Vec::len);
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("empty frame".into()));
    }
    let (fa, fb) = (frame_matrix(a, n), frame_matrix(b, n));
    let cosines = (fa.transpose() * &fb).singular_values();
    let cos_max = cosines.max().min(1.0);
    let residual = &fb - &fa * (fa.transpose() * &fb);
    // With dim B > n - dim A some direction of B must meet A.
    let sin_min = if b.len() + a.len() > n {
        0.0
    } else {
        residual.singular_values().min().max(0.0)
    };
    Ok(sin_min.atan2(cos_max))
}

/// Gram-Schmidt on `vectors`, dropping those already in the span.
pub fn gram_schmidt(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes for stability
        for _ in 0..2 {
            let p = project(&out, &w);
            for (wi, pi) in w.iter_mut().zip(&p) {
                *wi -= pi;
            }
        }
        let n = norm(&w);
        if n > 1e-10 {
            w.iter_mut().for_each(|x| *x /= n);
            out.push(w);
        }
    }
    out
}
