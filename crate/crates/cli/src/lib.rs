//! The `hopflab` command line: fiber polylines for plotting, map
//! validation, Frobenius–Schur indicators and homogeneity witnesses.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report is
//! still written), 2 on usage or I/O errors.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopflab_core::hopf::{stereographic_projection, HopfFamily};
use hopflab_core::moduli::{
    self, homogeneity_scan, round_map_classifier, ConstantMap, DomainFactor, GreatCircleFibration,
    IdentityMap, PolarContraction, SphereMap, DISJOINT_ANGLE, STRICTNESS,
};
use hopflab_core::repcheck::{fs_indicator, Character, GroupId, GroupSampler, INDICATOR_BAND};
use hopflab_core::report::{CheckOutcome, FiberPolylineFile, Polyline, Projection, RunReport};
use hopflab_core::sampling::stream_rng;
use hopflab_core::symmetry::{
    fiber_preservation_check, figure1_fibration, hopf_transitivity_check, screw_transitivity_check,
    FIBER_TOL, LINE_TOL,
};
use hopflab_core::{algebra, hopf, Error, IsometrySO4, UnitVector};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hopflab", version, about = "Hopf fibrations and great-circle fibrations of spheres")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, env = "HOPFLAB_DEFAULT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Complex,
    Quaternionic,
    Octonionic,
}

impl From<FamilyArg> for HopfFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Complex => HopfFamily::Complex,
            FamilyArg::Quaternionic => HopfFamily::Quaternionic,
            FamilyArg::Octonionic => HopfFamily::Octonionic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    None,
    Stereographic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample Hopf fibers as polylines.
    Fibers(FibersArgs),
    /// Check a map of S^2 and the great-circle fibration it defines.
    ValidateMap(ValidateMapArgs),
    /// Estimate a Frobenius–Schur indicator.
    Fs(FsArgs),
    /// Check explicit fiber-preserving isometries.
    Homogeneity(HomogeneityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FibersArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    /// Sphere dimension; 3, 7 and 15 for the three families by default.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    /// Points per fiber.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = ProjectionArg::None)]
    pub projection: ProjectionArg,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateMapArgs {
    /// `constant[:x,y,z]`, `polar-contraction:LAMBDA` or `identity`.
    pub map: String,
    /// Sampled point pairs.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FsArgs {
    /// `su2`, `so3`, `u1`, `su3`, `sp2`, or a product such as `su2xsu2`.
    pub group: String,
    /// `trivial`, `defining`, `conjugate`, `adjoint`, `sym2` or `ext2`; one
    /// per factor, comma separated, for products.
    pub rep: String,
    /// Haar samples.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct HomogeneityArgs {
    /// `hopf-s3` or `figure1[:ALPHA]`.
    pub target: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    Check(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
            Self::Check(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Check(_) => 1,
            Self::Usage(_) | Self::Io(_) => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// What a command produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Report(RunReport),
    Polylines(FiberPolylineFile),
}

impl Artifact {
    pub fn ok(&self) -> bool {
        match self {
            Self::Report(r) => r.ok(),
            Self::Polylines(_) => true,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let rendered = match (self, format) {
            (Self::Report(r), Format::Json) => r.to_json(),
            (Self::Report(r), Format::Csv) => r.to_csv(),
            (Self::Polylines(p), Format::Json) => p.to_json(),
            (Self::Polylines(p), Format::Csv) => p.to_csv(),
        };
        rendered.map_err(CliError::Check)
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hopflab: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let seed = cli.common.seed;
    let mut artifact = match &cli.command {
        Command::Fibers(a) => Artifact::Polylines(cmd_fibers(a, seed)?),
        Command::ValidateMap(a) => Artifact::Report(cmd_validate_map(&a.map, a.trials, seed)?),
        Command::Fs(a) => Artifact::Report(cmd_fs(&a.group, &a.rep, a.trials, seed)?),
        Command::Homogeneity(a) => Artifact::Report(cmd_homogeneity(&a.target, a.trials, seed)?),
    };
    if let Artifact::Report(r) = &mut artifact {
        r.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
    }
    let text = artifact.render(cli.common.format)?;
    match &cli.common.out {
        Some(path) => write_atomic(path, &text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(if artifact.ok() { 0 } else { 1 })
}

/// `count` fibers through random points of `S^dim`, `grid` points each.
pub fn cmd_fibers(args: &FibersArgs, seed: u64) -> Result<FiberPolylineFile, CliError> {
    let family = HopfFamily::from(args.family);
    let dim = args.dim.unwrap_or(match family {
        HopfFamily::Complex => 3,
        HopfFamily::Quaternionic => 7,
        HopfFamily::Octonionic => 15,
    });
    if !family.supports(dim) {
        return Err(CliError::Usage(format!("{family:?} Hopf fibration does not fiber S^{dim}")));
    }
    if args.count == 0 || args.grid < 2 {
        return Err(CliError::Usage("need --count >= 1 and --grid >= 2".into()));
    }
    let projection = match args.projection {
        ProjectionArg::None => Projection::None,
        ProjectionArg::Stereographic if dim == 3 => Projection::Stereographic,
        ProjectionArg::Stereographic => {
            return Err(CliError::Usage("stereographic projection is only offered for S^3".into()))
        }
    };
    let mut file = FiberPolylineFile::new(dim + 1, projection);
    let mut rng = stream_rng(seed, 0);
    for id in 0..args.count {
        // Fibers through the projection pole have a point at infinity.
        let points = loop {
            let x = UnitVector::random(dim, &mut rng);
            let fiber = family.fiber(&x).map_err(CliError::Check)?;
            let raw: Vec<Vec<f64>> = fiber.grid(args.grid).into_iter().map(UnitVector::into_coords).collect();
            match projection {
                Projection::None => break raw,
                Projection::Stereographic => {
                    if let Some(p) = raw.iter().map(|p| stereographic_projection(p)).collect::<Option<Vec<_>>>() {
                        if p.iter().flatten().all(|c| c.abs() < 1e6) {
                            break p;
                        }
                    }
                }
            }
        };
        file.fibers.push(Polyline { id, points });
    }
    Ok(file)
}

/// A map of `S^2` named on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    Constant([f64; 3]),
    PolarContraction(f64),
    Identity,
}

impl FromStr for MapSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad = || CliError::Usage(format!("cannot parse map '{s}'"));
        match (name, arg) {
            ("constant", None) => Ok(Self::Constant([1.0, 0.0, 0.0])),
            ("constant", Some(a)) => {
                let v = a
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                if v.len() != 3 {
                    return Err(bad());
                }
                let u = UnitVector::normalize(v).map_err(|_| bad())?;
                Ok(Self::Constant(u.to_array3().map_err(usage)?))
            }
            ("polar-contraction", Some(a)) => {
                let lambda: f64 = a.trim().parse().map_err(|_| bad())?;
                PolarContraction::new(lambda).map_err(usage)?;
                Ok(Self::PolarContraction(lambda))
            }
            ("identity", None) => Ok(Self::Identity),
            _ => Err(bad()),
        }
    }
}

impl MapSpec {
    pub fn build(&self) -> Result<Box<dyn SphereMap>, CliError> {
        Ok(match *self {
            Self::Constant(c) => Box::new(ConstantMap::new(&UnitVector::new(c.to_vec()).map_err(usage)?).map_err(usage)?),
            Self::PolarContraction(l) => Box::new(PolarContraction::new(l).map_err(usage)?),
            Self::Identity => Box::new(IdentityMap),
        })
    }
}

/// Points used by the homogeneity scan: domain points at least 0.05 rad
/// from the boundary.
fn scan_points(map: &dyn SphereMap, seed: u64, n: usize) -> Vec<[f64; 3]> {
    let mut rng = stream_rng(seed, u64::MAX);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = moduli::random_s2(&mut rng);
        if map.domain_margin(&x) > 0.05 {
            out.push(x);
        }
    }
    out
}

pub fn cmd_validate_map(spec: &str, pairs: usize, seed: u64) -> Result<RunReport, CliError> {
    let parsed: MapSpec = spec.parse()?;
    if pairs == 0 {
        return Err(CliError::Usage("--trials must be >= 1".into()));
    }
    let map = parsed.build()?;
    let mut report = RunReport::new("validate-map", VERSION, seed);
    report.param("map", spec).param("description", map.describe()).param("trials", pairs);

    let validation = moduli::validate_distance_decreasing(&map, pairs, seed).map_err(CliError::Check)?;
    let mut outcome = CheckOutcome::below("distance-decreasing", validation.worst_ratio, 1.0 - STRICTNESS);
    if let Some((x, y)) = validation.witness {
        outcome = outcome.with_detail(format!("worst pair {x:?} {y:?}"));
    }
    report.push(outcome);

    if validation.ok {
        let fibration = GreatCircleFibration::from_map(&map, pairs, seed, DomainFactor::First).map_err(CliError::Check)?;
        let disjoint = fibration
            .disjointness(pairs.min(10_000), seed.wrapping_add(1))
            .map_err(CliError::Check)?;
        let mut o = CheckOutcome::new("disjoint-fibers", disjoint.ok, disjoint.min_angle)
            .with_detail("smallest principal angle between sampled fibers");
        o.tolerance = Some(DISJOINT_ANGLE);
        report.push(o);
    }

    let points = scan_points(&map, seed, 64);
    let scan = homogeneity_scan(&map, &points).map_err(CliError::Check)?;
    let flag = if scan.constant_axes { "constant axes" } else { "not locally homogeneous" };
    report.push(CheckOutcome::new("homogeneity-scan", true, scan.spread.0.max(scan.spread.1)).with_detail(flag));

    let verdict = match round_map_classifier(&map, &points) {
        Ok(v) => verdict_name(v).to_string(),
        Err(Error::ClassifierPrecondition(m)) => format!("not applicable: {m}"),
        Err(e) => return Err(CliError::Check(e)),
    };
    let mean_sigma = scan.sigma_field.iter().map(|s| s.0 + s.1).sum::<f64>() / (2.0 * scan.sigma_field.len() as f64);
    report.push(CheckOutcome::new("round-map-classifier", true, mean_sigma).with_detail(verdict));
    Ok(report)
}

fn verdict_name(v: moduli::RoundVerdict) -> &'static str {
    match v {
        moduli::RoundVerdict::Hopf => "hopf",
        moduli::RoundVerdict::DistancePreservingExcluded => "distance-preserving-excluded",
        moduli::RoundVerdict::CurvatureExcluded => "curvature-excluded",
    }
}

pub fn cmd_fs(group: &str, rep: &str, n: usize, seed: u64) -> Result<RunReport, CliError> {
    let group: GroupId = group.parse().map_err(usage)?;
    let chi = Character::parse(&group, rep).map_err(usage)?;
    if n < hopflab_core::repcheck::MIN_SAMPLES {
        return Err(CliError::Usage(format!(
            "--trials must be >= {}",
            hopflab_core::repcheck::MIN_SAMPLES
        )));
    }
    let est = fs_indicator(&chi, &GroupSampler::new(group.clone()), n, seed).map_err(CliError::Check)?;
    let nearest = est.nearest_type();
    let mut report = RunReport::new("fs", VERSION, seed);
    report
        .param("group", &group)
        .param("rep", rep)
        .param("dimension", chi.dimension())
        .param("trials", n);
    let mut o = CheckOutcome::new("indicator", est.confident(), est.estimate).with_detail(format!(
        "nearest {} ({nearest})",
        nearest.indicator()
    ));
    o.tolerance = Some(INDICATOR_BAND);
    report.push(o);
    report.push(CheckOutcome::new("stderr", true, est.stderr));
    report.push(CheckOutcome::new("imaginary-mean", true, est.imag_mean));
    Ok(report)
}

/// A target of the `homogeneity` command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HomogeneityTarget {
    HopfS3,
    Figure1 { alpha: f64 },
}

impl FromStr for HomogeneityTarget {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot parse target '{s}'"));
        match s.split_once(':') {
            None if s == "hopf-s3" => Ok(Self::HopfS3),
            None if s == "figure1" => Ok(Self::Figure1 { alpha: 1.0 }),
            Some(("figure1", a)) => {
                let alpha: f64 = a.trim().parse().map_err(|_| bad())?;
                if !alpha.is_finite() {
                    return Err(bad());
                }
                Ok(Self::Figure1 { alpha })
            }
            _ => Err(bad()),
        }
    }
}

pub fn cmd_homogeneity(target: &str, trials: usize, seed: u64) -> Result<RunReport, CliError> {
    let parsed: HomogeneityTarget = target.parse()?;
    if trials == 0 {
        return Err(CliError::Usage("--trials must be >= 1".into()));
    }
    let mut report = RunReport::new("homogeneity", VERSION, seed);
    report.param("target", target).param("trials", trials);
    match parsed {
        HomogeneityTarget::HopfS3 => {
            let r = hopf_transitivity_check(trials, seed).map_err(CliError::Check)?;
            report.push(CheckOutcome::below("transitivity", r.worst_residual, FIBER_TOL));
            let q = algebra::haar_unit_quaternion(&mut stream_rng(seed, u64::MAX));
            let g = IsometrySO4::left_multiplication(q).map_err(CliError::Check)?;
            let r = fiber_preservation_check(hopf::complex_hopf_fiber, &g, trials, seed.wrapping_add(1))
                .map_err(CliError::Check)?;
            report.push(
                CheckOutcome::below("fiber-preservation", r.worst_residual, FIBER_TOL)
                    .with_detail("random left multiplication"),
            );
        }
        HomogeneityTarget::Figure1 { alpha } => {
            report.param("alpha", alpha);
            let r = screw_transitivity_check(&figure1_fibration(alpha), trials, seed).map_err(CliError::Check)?;
            report.push(CheckOutcome::below("screw-transitivity", r.worst_residual, LINE_TOL));
        }
    }
    Ok(report)
}
