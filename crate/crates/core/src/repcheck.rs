//! Characters, Haar samplers and Frobenius–Schur indicators of small compact
//! groups, plus a table of low-dimensional irreducible representations.
//!
//! The indicator `∫ χ(g^2) dg` is `1`, `0` or `-1` for an irreducible
//! representation of real, complex or quaternionic type.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{haar_unit_quaternion, Quaternion};
use crate::error::{Error, Result};
use crate::sampling;

pub type CMatrix = DMatrix<Complex64>;

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: usize = 1000;
/// Acceptance band around the exact indicator values.
pub const INDICATOR_BAND: f64 = 0.05;
/// Bound for the product-grid factorization identity.
pub const FACTORIZATION_TOL: f64 = 1e-12;
/// Floor for the imaginary-part sanity check; it matters only when every
/// sample is identical (e.g. the trivial character), where `stderr = 0`.
pub const IMAG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupId {
    SU2,
    SO3,
    U1,
    SU3,
    Sp2,
    Product(Box<GroupId>, Box<GroupId>),
}

impl GroupId {
    pub fn product(a: GroupId, b: GroupId) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    /// Size of the defining matrices of a simple factor; `None` for products.
    pub fn defining_dim(&self) -> Option<usize> {
        match self {
            Self::U1 => Some(1),
            Self::SU2 => Some(2),
            Self::SO3 | Self::SU3 => Some(3),
            Self::Sp2 => Some(4),
            Self::Product(..) => None,
        }
    }

    pub fn factor_count(&self) -> usize {
        match self {
            Self::Product(a, b) => a.factor_count() + b.factor_count(),
            _ => 1,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SU2 => f.write_str("su2"),
            Self::SO3 => f.write_str("so3"),
            Self::U1 => f.write_str("u1"),
            Self::SU3 => f.write_str("su3"),
            Self::Sp2 => f.write_str("sp2"),
            Self::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    /// `su2`, `so3`, `u1`, `su3`, `sp2`, or two of them joined by `x`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some((a, b)) = s.split_once('x') {
            return Ok(Self::product(a.parse()?, b.parse()?));
        }
        match s.as_str() {
            "su2" => Ok(Self::SU2),
            "so3" => Ok(Self::SO3),
            "u1" => Ok(Self::U1),
            "su3" => Ok(Self::SU3),
            "sp2" => Ok(Self::Sp2),
            other => Err(Error::UnsupportedGroup(other.to_string())),
        }
    }
}

/// An element of a group or of a product of groups, one unitary matrix per
/// simple factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub factors: Vec<CMatrix>,
}

impl GroupElement {
    pub fn identity(group: &GroupId) -> Self {
        let mut factors = Vec::new();
        push_identity(group, &mut factors);
        Self { factors }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|a| a.adjoint()).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }
}

fn push_identity(group: &GroupId, out: &mut Vec<CMatrix>) {
    match group {
        GroupId::Product(a, b) => {
            push_identity(a, out);
            push_identity(b, out);
        }
        simple => {
            let n = simple.defining_dim().unwrap_or(1);
            out.push(CMatrix::identity(n, n));
        }
    }
}

/// Haar-distributed elements of a [`GroupId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSampler {
    group: GroupId,
}

impl GroupSampler {
    pub fn new(group: GroupId) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &GroupId {
        &self.group
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let mut factors = Vec::new();
        draw_into(&self.group, rng, &mut factors);
        GroupElement { factors }
    }
}

fn draw_into<R: Rng + ?Sized>(group: &GroupId, rng: &mut R, out: &mut Vec<CMatrix>) {
    match group {
        GroupId::SU2 => out.push(quaternion_to_su2(haar_unit_quaternion(rng))),
        GroupId::SO3 => {
            let r = haar_unit_quaternion(rng).to_rotation_matrix();
            out.push(CMatrix::from_fn(3, 3, |i, j| Complex64::new(r[i][j], 0.0)));
        }
        GroupId::U1 => {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            out.push(CMatrix::from_element(1, 1, Complex64::from_polar(1.0, theta)));
        }
        GroupId::SU3 => out.push(haar_special_unitary(3, rng)),
        GroupId::Sp2 => out.push(haar_sp2(rng)),
        GroupId::Product(a, b) => {
            draw_into(a, rng, out);
            draw_into(b, rng, out);
        }
    }
}

/// `a + b j ↦ [[a, -b], [conj b, conj a]]` with `a = w + x i`, `b = y + z i`;
/// an injective algebra homomorphism from the quaternions into `2 x 2`
/// complex matrices taking conjugation to the adjoint.
pub fn quaternion_to_su2(q: Quaternion) -> CMatrix {
    let a = Complex64::new(q.w, q.x);
    let b = Complex64::new(q.y, q.z);
    CMatrix::from_row_slice(2, 2, &[a, -b, b.conj(), a.conj()])
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar element of `SU(n)`: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`, then scaled by a root of `det^{-1}`.
pub fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / n as f64);
    q * root
}

/// Haar element of `Sp(2)`: quaternionic Gram–Schmidt on the columns of a
/// quaternionic Gaussian `2 x 2` matrix, embedded blockwise in `U(4)`.
pub fn haar_sp2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let mut gaussian = || {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    };
    let mut c0 = [gaussian(), gaussian()];
    let mut c1 = [gaussian(), gaussian()];
    let norm0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
    c0 = c0.map(|q| q.scale(1.0 / norm0));
    // c1 -= c0 <c0, c1>, with <u, v> = sum conj(u_i) v_i
    let overlap = c0[0].conj() * c1[0] + c0[1].conj() * c1[1];
    c1 = [c1[0] - c0[0] * overlap, c1[1] - c0[1] * overlap];
    let norm1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    c1 = c1.map(|q| q.scale(1.0 / norm1));
    let entries = [[c0[0], c1[0]], [c0[1], c1[1]]];
    let mut out = CMatrix::zeros(4, 4);
    for (i, row) in entries.iter().enumerate() {
        for (j, q) in row.iter().enumerate() {
            out.view_mut((2 * i, 2 * j), (2, 2)).copy_from(&quaternion_to_su2(*q));
        }
    }
    out
}

/// Named representations of a simple factor, built from its defining
/// matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepId {
    Trivial,
    Defining,
    ConjugateDefining,
    /// For `U(1)` this is the trivial representation.
    Adjoint,
    SymmetricSquare,
    /// The full exterior square; for `Sp(2)` it is reducible, the 5-dim
    /// irreducible part plus the line spanned by the symplectic form.
    ExteriorSquare,
}

impl FromStr for RepId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trivial" => Ok(Self::Trivial),
            "defining" | "vector" => Ok(Self::Defining),
            "conjugate" | "conjugate-defining" => Ok(Self::ConjugateDefining),
            "adjoint" => Ok(Self::Adjoint),
            "sym2" | "symmetric-square" => Ok(Self::SymmetricSquare),
            "ext2" | "exterior-square" => Ok(Self::ExteriorSquare),
            other => Err(Error::InvalidParameter(format!("unknown representation '{other}'"))),
        }
    }
}

impl fmt::Display for RepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "trivial",
            Self::Defining => "defining",
            Self::ConjugateDefining => "conjugate-defining",
            Self::Adjoint => "adjoint",
            Self::SymmetricSquare => "symmetric-square",
            Self::ExteriorSquare => "exterior-square",
        })
    }
}

/// The character of a representation, evaluated on a [`GroupElement`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Character {
    Simple { group: GroupId, rep: RepId },
    Tensor(Box<Character>, Box<Character>),
}

impl Character {
    pub fn new(group: GroupId, rep: RepId) -> Result<Self> {
        let n = match group.defining_dim() {
            Some(n) => n,
            None => return Err(Error::UnsupportedRepresentation { group: group.to_string(), rep: rep.to_string() }),
        };
        if rep == RepId::ExteriorSquare && n < 2 {
            return Err(Error::UnsupportedRepresentation { group: group.to_string(), rep: rep.to_string() });
        }
        Ok(Self::Simple { group, rep })
    }

    /// Parses `rep` for `group`; on a product group `rep` lists one
    /// representation per factor, separated by commas.
    pub fn parse(group: &GroupId, rep: &str) -> Result<Self> {
        match group {
            GroupId::Product(a, b) => {
                let (ra, rb) = rep.split_once(',').ok_or_else(|| Error::UnsupportedRepresentation {
                    group: group.to_string(),
                    rep: rep.to_string(),
                })?;
                Ok(tensor_character(&Self::parse(a, ra)?, &Self::parse(b, rb)?))
            }
            simple => Self::new(simple.clone(), rep.parse()?),
        }
    }

    pub fn group(&self) -> GroupId {
        match self {
            Self::Simple { group, .. } => group.clone(),
            Self::Tensor(a, b) => GroupId::product(a.group(), b.group()),
        }
    }

    fn arity(&self) -> usize {
        match self {
            Self::Simple { .. } => 1,
            Self::Tensor(a, b) => a.arity() + b.arity(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Tensor(a, b) => a.dimension() * b.dimension(),
            Self::Simple { group, rep } => {
                let n = group.defining_dim().unwrap_or(1);
                match rep {
                    RepId::Trivial => 1,
                    RepId::Defining | RepId::ConjugateDefining => n,
                    RepId::Adjoint => match group {
                        GroupId::U1 => 1,
                        GroupId::SO3 => 3,
                        GroupId::Sp2 => 10,
                        _ => n * n - 1,
                    },
                    RepId::SymmetricSquare => n * (n + 1) / 2,
                    RepId::ExteriorSquare => n * (n - 1) / 2,
                }
            }
        }
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        if g.factors.len() != self.arity() {
            return Err(Error::DimensionMismatch { expected: self.arity(), found: g.factors.len() });
        }
        self.eval_factors(&g.factors)
    }

    fn eval_factors(&self, factors: &[CMatrix]) -> Result<Complex64> {
        match self {
            Self::Tensor(a, b) => {
                let (fa, fb) = factors.split_at(a.arity());
                Ok(a.eval_factors(fa)? * b.eval_factors(fb)?)
            }
            Self::Simple { group, rep } => {
                let m = &factors[0];
                let n = group.defining_dim().unwrap_or(1);
                if m.nrows() != n || m.ncols() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
                }
                let tr = m.trace();
                let tr_sq = || (m * m).trace();
                Ok(match rep {
                    RepId::Trivial => Complex64::new(1.0, 0.0),
                    RepId::Defining => tr,
                    RepId::ConjugateDefining => tr.conj(),
                    RepId::Adjoint => match group {
                        GroupId::U1 => Complex64::new(1.0, 0.0),
                        GroupId::SO3 => tr,
                        GroupId::Sp2 => (tr * tr + tr_sq()) * 0.5,
                        _ => Complex64::new(tr.norm_sqr() - 1.0, 0.0),
                    },
                    RepId::SymmetricSquare => (tr * tr + tr_sq()) * 0.5,
                    RepId::ExteriorSquare => (tr * tr - tr_sq()) * 0.5,
                })
            }
        }
    }
}

/// `χ_{V⊗W}(g, h) = χ_V(g) χ_W(h)` on the product group.
pub fn tensor_character(chi_v: &Character, chi_w: &Character) -> Character {
    Character::Tensor(Box::new(chi_v.clone()), Box::new(chi_w.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepType {
    Real,
    Complex,
    Quaternionic,
}

impl RepType {
    pub fn indicator(self) -> i32 {
        match self {
            Self::Real => 1,
            Self::Complex => 0,
            Self::Quaternionic => -1,
        }
    }

    /// The type whose indicator is closest to `estimate`.
    pub fn nearest(estimate: f64) -> Self {
        if estimate >= 0.5 {
            Self::Real
        } else if estimate > -0.5 {
            Self::Complex
        } else {
            Self::Quaternionic
        }
    }
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Real => "real",
            Self::Complex => "complex",
            Self::Quaternionic => "quaternionic",
        })
    }
}

/// Monte Carlo estimate of a Frobenius–Schur indicator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsEstimate {
    /// Mean of `Re χ(g^2)`.
    pub estimate: f64,
    /// Sample standard deviation of `Re χ(g^2)` over `sqrt(n)`.
    pub stderr: f64,
    /// Mean of `Im χ(g^2)`, zero in expectation.
    pub imag_mean: f64,
    pub n: usize,
}

impl FsEstimate {
    pub fn nearest_type(&self) -> RepType {
        RepType::nearest(self.estimate)
    }

    /// Whether the estimate lies within [`INDICATOR_BAND`] of its nearest
    /// exact value.
    pub fn confident(&self) -> bool {
        (self.estimate - self.nearest_type().indicator() as f64).abs() < INDICATOR_BAND
    }

    fn from_values(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        let (estimate, stderr) = mean_and_stderr(&re);
        let (imag_mean, imag_stderr) = mean_and_stderr(&im);
        if !(estimate.is_finite() && stderr.is_finite() && imag_mean.is_finite()) {
            return Err(Error::ImaginarySanity { imag: imag_mean, stderr });
        }
        if imag_mean.abs() >= 5.0 * stderr.max(imag_stderr) + IMAG_FLOOR {
            return Err(Error::ImaginarySanity { imag: imag_mean, stderr });
        }
        Ok(Self { estimate, stderr, imag_mean, n })
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = neumaier_sum(xs.iter().copied()) / n;
    let ss = neumaier_sum(xs.iter().map(|x| (x - mean) * (x - mean)));
    let var = if xs.len() > 1 { ss / (n - 1.0) } else { 0.0 };
    (mean, (var / n).sqrt())
}

/// Compensated summation.
fn neumaier_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn complex_mean(values: &[Complex64]) -> Complex64 {
    let n = values.len() as f64;
    Complex64::new(
        neumaier_sum(values.iter().map(|z| z.re)) / n,
        neumaier_sum(values.iter().map(|z| z.im)) / n,
    )
}

fn check_compatible(chi: &Character, sampler: &GroupSampler) -> Result<()> {
    if &chi.group() != sampler.group() {
        return Err(Error::UnsupportedRepresentation {
            group: sampler.group().to_string(),
            rep: format!("character of {}", chi.group()),
        });
    }
    Ok(())
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// `(1/n) Σ Re χ(g_k^2)` over `n` Haar samples drawn from seeded streams.
pub fn fs_indicator(chi: &Character, sampler: &GroupSampler, n: usize, seed: u64) -> Result<FsEstimate> {
    check_samples(n)?;
    check_compatible(chi, sampler)?;
    let values = sampling::par_samples(n, seed, |rng| chi.eval(&sampler.draw(rng).square()));
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    FsEstimate::from_values(&values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorMode {
    /// `(1/n) Σ_k χ_V(g_k^2) χ_W(h_k^2)`.
    #[default]
    Paired,
    /// `(1/n^2) Σ_{j,k} χ_V(g_j^2) χ_W(h_k^2)`, evaluated term by term.
    ProductGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorTypeReport {
    pub mode: TensorMode,
    pub indicator_v: FsEstimate,
    pub indicator_w: FsEstimate,
    /// `Re(mean χ_V(g^2) · mean χ_W(h^2))`.
    pub indicator_product: f64,
    pub indicator_tensor: f64,
    /// Present in paired mode.
    pub tensor_stderr: Option<f64>,
    /// In product-grid mode, whether the term-by-term grid sum reproduces the
    /// product of the factor means to [`FACTORIZATION_TOL`]. In paired mode,
    /// whether the two agree within five standard errors.
    pub consistent: bool,
}

/// Compares the indicator of `V ⊗ W` with the product of the indicators of
/// `V` and `W` over one set of sample pairs `(g_k, h_k)`.
pub fn tensor_type_check(
    chi_v: &Character,
    sampler_g: &GroupSampler,
    chi_w: &Character,
    sampler_h: &GroupSampler,
    n: usize,
    seed: u64,
    mode: TensorMode,
) -> Result<TensorTypeReport> {
    check_samples(n)?;
    check_compatible(chi_v, sampler_g)?;
    check_compatible(chi_w, sampler_h)?;
    let pairs = sampling::par_samples(n, seed, |rng| -> Result<(Complex64, Complex64)> {
        let g = sampler_g.draw(rng);
        let h = sampler_h.draw(rng);
        Ok((chi_v.eval(&g.square())?, chi_w.eval(&h.square())?))
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let (a, b): (Vec<Complex64>, Vec<Complex64>) = pairs.into_iter().unzip();
    let indicator_v = FsEstimate::from_values(&a)?;
    let indicator_w = FsEstimate::from_values(&b)?;
    let indicator_product = (complex_mean(&a) * complex_mean(&b)).re;
    let (indicator_tensor, tensor_stderr, consistent) = match mode {
        TensorMode::Paired => {
            let joint: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let est = FsEstimate::from_values(&joint)?;
            let spread = 5.0 * (est.stderr + indicator_v.stderr + indicator_w.stderr) + IMAG_FLOOR;
            (est.estimate, Some(est.stderr), (est.estimate - indicator_product).abs() < spread)
        }
        TensorMode::ProductGrid => {
            let rows: Vec<f64> = a
                .par_iter()
                .map(|x| neumaier_sum(b.iter().map(|y| (x * y).re)))
                .collect();
            let nf = n as f64;
            let grid = neumaier_sum(rows.into_iter()) / (nf * nf);
            (grid, None, (grid - indicator_product).abs() < FACTORIZATION_TOL)
        }
    };
    Ok(TensorTypeReport {
        mode,
        indicator_v,
        indicator_w,
        indicator_product,
        indicator_tensor,
        tensor_stderr,
        consistent,
    })
}

/// Groups covered by [`irrep_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IrrepGroup {
    /// `SU(N)` for `2 <= N <= 8`.
    SpecialUnitary(usize),
    /// `Sp(n)` for `1 <= n <= 3`.
    Symplectic(usize),
    Spin9,
}

impl fmt::Display for IrrepGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SpecialUnitary(n) => write!(f, "SU({n})"),
            Self::Symplectic(n) => write!(f, "Sp({n})"),
            Self::Spin9 => f.write_str("Spin(9)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepFact {
    pub group: IrrepGroup,
    pub dimension: usize,
    pub kind: RepType,
    pub note: String,
}

impl IrrepGroup {
    pub fn dimension(&self) -> usize {
        match *self {
            Self::SpecialUnitary(n) => n * n - 1,
            Self::Symplectic(n) => n * (2 * n + 1),
            Self::Spin9 => 36,
        }
    }
}

/// Nontrivial irreducible complex representations of dimension below
/// `dim G`, up to duals, with their types.
pub fn irrep_table(group: IrrepGroup) -> Result<Vec<IrrepFact>> {
    let fact = |dimension: usize, kind: RepType, note: &str| IrrepFact {
        group,
        dimension,
        kind,
        note: note.to_string(),
    };
    use RepType::*;
    match group {
        // SU(2) = Sp(1): only the defining representation is small enough.
        IrrepGroup::SpecialUnitary(2) => Ok(vec![fact(2, Quaternionic, "defining")]),
        IrrepGroup::SpecialUnitary(big) if (3..=8).contains(&big) => {
            let n = big - 1;
            let mut out = vec![
                fact(n + 1, Complex, "defining"),
                fact((n + 1) * (n + 2) / 2, Complex, "symmetric square"),
            ];
            match n {
                2 => out.push(fact(3, Complex, "exterior square, equivalent to the dual of the defining representation")),
                3 => out.push(fact(6, Real, "exterior square")),
                _ => out.push(fact(n * (n + 1) / 2, Complex, "exterior square")),
            }
            match n {
                5 => out.push(fact(20, Quaternionic, "exterior cube")),
                6 | 7 => out.push(fact((n - 1) * n * (n + 1) / 6, Complex, "exterior cube")),
                _ => {}
            }
            Ok(out)
        }
        IrrepGroup::Symplectic(n) if (1..=3).contains(&n) => {
            let mut out = vec![fact(2 * n, Quaternionic, "defining")];
            if n >= 2 {
                out.push(fact(2 * n * n - n - 1, Real, "traceless exterior square"));
            }
            if n == 3 {
                out.push(fact(14, Quaternionic, "traceless exterior cube"));
            }
            Ok(out)
        }
        IrrepGroup::Spin9 => Ok(vec![fact(9, Real, "vector"), fact(16, Real, "spin")]),
        other => Err(Error::UnsupportedGroup(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::stream_rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    const SIMPLE: [GroupId; 5] = [GroupId::SU2, GroupId::SO3, GroupId::U1, GroupId::SU3, GroupId::Sp2];

    #[test]
    fn quaternion_embedding_is_a_homomorphism() {
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            let p = haar_unit_quaternion(&mut rng);
            let q = haar_unit_quaternion(&mut rng);
            let lhs = quaternion_to_su2(p * q);
            let rhs = quaternion_to_su2(p) * quaternion_to_su2(q);
            assert!((lhs - rhs).camax() < 1e-14);
            assert!((quaternion_to_su2(p.conj()) - quaternion_to_su2(p).adjoint()).camax() < 1e-15);
        }
    }

    #[test]
    fn samples_are_unitary_with_unit_determinant() {
        let mut rng = stream_rng(2, 0);
        for group in SIMPLE {
            let sampler = GroupSampler::new(group.clone());
            for _ in 0..200 {
                let g = &sampler.draw(&mut rng).factors[0];
                let n = g.nrows();
                assert!((g.adjoint() * g - CMatrix::identity(n, n)).camax() < 1e-10, "{group}");
                if group != GroupId::U1 {
                    assert!((g.determinant() - c(1.0)).norm() < 1e-10, "{group}");
                }
            }
        }
    }

    #[test]
    fn sp2_samples_preserve_the_symplectic_form() {
        // J = diag(J2, J2) with J2 = [[0, 1], [-1, 0]]; Sp(2) = U(4) ∩ {g^T J g = J}
        let mut j = CMatrix::zeros(4, 4);
        for b in 0..2 {
            j[(2 * b, 2 * b + 1)] = c(1.0);
            j[(2 * b + 1, 2 * b)] = c(-1.0);
        }
        let mut rng = stream_rng(3, 0);
        for _ in 0..100 {
            let g = haar_sp2(&mut rng);
            assert!((g.transpose() * &j * &g - &j).camax() < 1e-12);
        }
    }

    #[test]
    fn characters_at_identity_and_bounds() {
        let mut rng = stream_rng(4, 0);
        for group in SIMPLE {
            for rep in [
                RepId::Trivial,
                RepId::Defining,
                RepId::ConjugateDefining,
                RepId::Adjoint,
                RepId::SymmetricSquare,
                RepId::ExteriorSquare,
            ] {
                let Ok(chi) = Character::new(group.clone(), rep) else {
                    assert!(group == GroupId::U1 && rep == RepId::ExteriorSquare);
                    continue;
                };
                let dim = chi.dimension() as f64;
                assert_eq!(chi.eval(&GroupElement::identity(&group)).unwrap(), c(dim), "{group} {rep}");
                let sampler = GroupSampler::new(group.clone());
                for _ in 0..50 {
                    assert!(chi.eval(&sampler.draw(&mut rng)).unwrap().norm() <= dim + 1e-9);
                }
            }
        }
    }

    #[test]
    fn class_invariance() {
        let mut rng = stream_rng(5, 0);
        let product = GroupId::product(GroupId::SU3, GroupId::SU2);
        let mut chars: Vec<Character> = SIMPLE
            .iter()
            .flat_map(|g| [RepId::Defining, RepId::Adjoint, RepId::SymmetricSquare].map(|r| Character::new(g.clone(), r).unwrap()))
            .collect();
        chars.push(Character::parse(&product, "defining,adjoint").unwrap());
        for chi in chars {
            let sampler = GroupSampler::new(chi.group());
            for _ in 0..50 {
                let g = sampler.draw(&mut rng);
                let h = sampler.draw(&mut rng);
                let conj = h.mul(&g).mul(&h.inverse());
                assert!((chi.eval(&conj).unwrap() - chi.eval(&g).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn tensor_character_examples() {
        let su2 = Character::new(GroupId::SU2, RepId::Defining).unwrap();
        let trivial = Character::new(GroupId::SU2, RepId::Trivial).unwrap();
        let t = tensor_character(&su2, &su2);
        let id = GroupElement::identity(&t.group());
        assert_eq!(t.eval(&id).unwrap(), c(4.0));
        let i = quaternion_to_su2(Quaternion::I);
        let g = GroupElement { factors: vec![i.clone(), CMatrix::identity(2, 2)] };
        assert!(t.eval(&g).unwrap().norm() < 1e-15);
        let mut rng = stream_rng(6, 0);
        let sampler = GroupSampler::new(t.group());
        for _ in 0..20 {
            let g = sampler.draw(&mut rng);
            let with_trivial = tensor_character(&trivial, &su2).eval(&g).unwrap();
            let alone = su2.eval(&GroupElement { factors: vec![g.factors[1].clone()] }).unwrap();
            assert_eq!(with_trivial, alone);
        }
        assert!(t.eval(&GroupElement::identity(&GroupId::SU2)).is_err());
    }

    #[test]
    fn trivial_indicator_is_exact() {
        for group in SIMPLE {
            let chi = Character::new(group.clone(), RepId::Trivial).unwrap();
            let est = fs_indicator(&chi, &GroupSampler::new(group), 1000, 1).unwrap();
            assert_eq!(est.estimate, 1.0);
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn indicators_of_small_representations() {
        let cases = [
            (GroupId::SU2, RepId::Defining, -1.0),
            (GroupId::SU2, RepId::Adjoint, 1.0),
            (GroupId::SO3, RepId::Defining, 1.0),
            (GroupId::U1, RepId::Defining, 0.0),
            (GroupId::SU3, RepId::Defining, 0.0),
            (GroupId::SU3, RepId::Adjoint, 1.0),
            (GroupId::Sp2, RepId::Defining, -1.0),
            // 1 + 5, both real
            (GroupId::Sp2, RepId::ExteriorSquare, 2.0),
            (GroupId::Sp2, RepId::Adjoint, 1.0),
        ];
        for (group, rep, exact) in cases {
            let chi = Character::new(group.clone(), rep).unwrap();
            let est = fs_indicator(&chi, &GroupSampler::new(group.clone()), 20_000, 11).unwrap();
            assert!((est.estimate - exact).abs() < 6.0 * est.stderr + 1e-9, "{group} {rep}: {est:?}");
        }
    }

    #[test]
    fn defining_characters_average_to_zero() {
        for group in [GroupId::SU2, GroupId::SU3] {
            let sampler = GroupSampler::new(group.clone());
            let chi = Character::new(group, RepId::Defining).unwrap();
            let values: Vec<Complex64> =
                sampling::par_samples(100_000, 21, |rng| chi.eval(&sampler.draw(rng)).unwrap());
            let est = FsEstimate::from_values(&values).unwrap();
            assert!(est.estimate.abs() < 5.0 * est.stderr, "{est:?}");
        }
    }

    #[test]
    fn estimator_preconditions_and_sanity() {
        let chi = Character::new(GroupId::SU2, RepId::Defining).unwrap();
        let sampler = GroupSampler::new(GroupId::SU2);
        assert!(fs_indicator(&chi, &sampler, 999, 0).is_err());
        assert!(fs_indicator(&chi, &GroupSampler::new(GroupId::SU3), 1000, 0).is_err());
        // a purely imaginary constant character is caught
        let broken = vec![Complex64::new(0.5, 0.25); 1000];
        assert!(matches!(FsEstimate::from_values(&broken), Err(Error::ImaginarySanity { .. })));
    }

    #[test]
    fn product_grid_factorizes() {
        let v = Character::new(GroupId::SU3, RepId::Defining).unwrap();
        let w = Character::new(GroupId::SU2, RepId::Defining).unwrap();
        let r = tensor_type_check(
            &v,
            &GroupSampler::new(GroupId::SU3),
            &w,
            &GroupSampler::new(GroupId::SU2),
            1000,
            5,
            TensorMode::ProductGrid,
        )
        .unwrap();
        assert!(r.consistent, "{r:?}");
        assert!(r.indicator_tensor.abs() < 0.05);
    }

    #[test]
    fn tensor_with_trivial_matches_factor() {
        let v = Character::new(GroupId::SO3, RepId::Trivial).unwrap();
        let w = Character::new(GroupId::SU2, RepId::Defining).unwrap();
        let r = tensor_type_check(
            &v,
            &GroupSampler::new(GroupId::SO3),
            &w,
            &GroupSampler::new(GroupId::SU2),
            4000,
            2,
            TensorMode::Paired,
        )
        .unwrap();
        assert_eq!(r.indicator_tensor, r.indicator_w.estimate);
        assert!(r.consistent);
    }

    #[test]
    fn irrep_table_entries() {
        let dims = |g| -> Vec<(usize, RepType)> {
            irrep_table(g).unwrap().into_iter().map(|f| (f.dimension, f.kind)).collect()
        };
        use RepType::*;
        assert_eq!(dims(IrrepGroup::Symplectic(2)), vec![(4, Quaternionic), (5, Real)]);
        assert_eq!(dims(IrrepGroup::Spin9), vec![(9, Real), (16, Real)]);
        assert!(dims(IrrepGroup::Symplectic(3)).contains(&(14, Quaternionic)));
        assert_eq!(dims(IrrepGroup::SpecialUnitary(4)), vec![(4, Complex), (10, Complex), (6, Real)]);
        assert!(dims(IrrepGroup::SpecialUnitary(6)).contains(&(20, Quaternionic)));
        assert_eq!(dims(IrrepGroup::SpecialUnitary(8)).last(), Some(&(56, Complex)));
        assert!(irrep_table(IrrepGroup::SpecialUnitary(9)).is_err());
        assert!(irrep_table(IrrepGroup::Symplectic(4)).is_err());
        assert!(irrep_table(IrrepGroup::SpecialUnitary(1)).is_err());

        let mut all = vec![IrrepGroup::Spin9];
        all.extend((2..=8).map(IrrepGroup::SpecialUnitary));
        all.extend((1..=3).map(IrrepGroup::Symplectic));
        for g in all {
            for f in irrep_table(g).unwrap() {
                assert!(f.dimension > 1 && f.dimension < g.dimension(), "{f:?}");
                if f.kind == Quaternionic {
                    assert_eq!(f.dimension % 2, 0, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("su2xsu3".parse::<GroupId>().unwrap(), GroupId::product(GroupId::SU2, GroupId::SU3));
        assert!("g2".parse::<GroupId>().is_err());
        let g: GroupId = "su2xsu2".parse().unwrap();
        assert!(Character::parse(&g, "defining").is_err());
        assert_eq!(Character::parse(&g, "defining,defining").unwrap().dimension(), 4);
        assert!(Character::parse(&GroupId::U1, "ext2").is_err());
    }
}
