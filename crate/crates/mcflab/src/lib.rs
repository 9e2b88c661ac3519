//! Numerical laboratory for mean curvature flow in a catalog of ambient
//! Riemannian spaces carrying Riemannian submersions with minimal fibers.
//!
//! The crate is organized around five subsystems:
//!
//! - [`spaces`]: the ambient-geometry catalog (Euclidean space, round and
//!   Berger spheres, the Fubini-Study 2-sphere, the Heisenberg group, tangent
//!   sphere bundles with the Sasaki metric), each realized through an explicit
//!   Cartesian model with metric, connection, curvature, and exp/log maps.
//! - [`submersions`]: the three concrete circle-fiber submersions at desk
//!   scale (Hopf, Heisenberg projection, Sasaki bundle projection) with
//!   splitting, horizontal lifts, fiber sampling, and O'Neill tensors.
//! - [`immersions`]: discrete closed curves and surfaces with second
//!   fundamental form estimation, lifting/projection through a submersion,
//!   tangency defects, and pinching-margin evaluation.
//! - [`flow`]: explicit mean curvature flow with adaptive stepping,
//!   remeshing, singularity detection, and fate classification.
//! - [`verify`]: the harness that certifies flow/submersion commutation and
//!   the formula-level identities relating a submanifold to its lift.

pub mod error;
pub mod flow;
pub mod immersions;
pub mod spaces;
pub mod submersions;
pub mod verify;

pub(crate) mod linalg;

pub use error::{GeomError, Result};

/// Dynamically sized coordinate vector; ambient models range over R^2..R^6.
pub type DVec = nalgebra::DVector<f64>;
pub type DMat = nalgebra::DMatrix<f64>;

pub(crate) fn dvec(s: &[f64]) -> DVec {
    DVec::from_column_slice(s)
}
