//! Numerical geometry of Hopf fibrations and great-circle fibrations of the
//! 3-sphere.
//!
//! * [`algebra`]: quaternions, octonions, sphere points and `SO(4)` as pairs of
//!   unit quaternions.
//! * [`hopf`]: complex, quaternionic and octonionic Hopf fibers and base maps.
//! * [`grassmann`]: oriented 2-planes of `R^4` as points of `S^2 x S^2`.
//! * [`moduli`]: fibrations as distance-decreasing maps of `S^2`, their
//!   differentials and the curvature tools used to rule out homogeneity.
//! * [`symmetry`]: explicit fiber-preserving isometries.
//! * [`repcheck`]: characters, Haar samplers and Frobenius-Schur indicators.
//! * [`report`]: serializable run reports and polyline files.

pub mod algebra;
pub mod error;
pub mod grassmann;
pub mod hopf;
pub mod moduli;
pub mod repcheck;
pub mod report;
pub mod sampling;
pub mod subspace;
pub mod symmetry;

pub use algebra::{IsometrySO4, Octonion, Quaternion, UnitVector};
pub use error::{Error, Result};
pub use grassmann::{ModuliPoint, OrientedPlane2};
pub use hopf::{BasePoint, FiberSampler, HopfFamily};
pub use repcheck::{Character, GroupId, GroupSampler, IrrepFact, RepType};
pub use report::{CheckOutcome, FiberPolylineFile, RunReport};
