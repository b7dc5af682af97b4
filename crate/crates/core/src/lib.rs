//! Braid-valued cocycles of surface homeomorphisms and the quasimorphisms
//! they induce.
//!
//! The crate is organized bottom-up:
//!
//! * [`words`] — exact word arithmetic in free groups and closed-surface
//!   groups (free reduction, Dehn's algorithm, subword counting).
//! * [`qm`] — homogeneous counting quasimorphisms on free groups, their
//!   symmetrization, composition with retractions/projections, and defect
//!   estimation.
//! * [`surface`] — flat polygon models of the torus and of genus-`g`
//!   surfaces, straight-segment connectors, and extraction of fundamental
//!   group words from traced paths.
//! * [`dynamics`] — a small DSL of explicit area-preserving homeomorphisms
//!   (annulus twists, disk rotations, torus translations) with canonical
//!   isotopies.
//! * [`cocycle`] — the braid-valued cocycle `gamma(f, x)` obtained by
//!   closing the isotopy trajectory of `x` through straight connectors.
//! * [`gg`] — Monte Carlo and pointwise evaluation of the induced
//!   functionals, semi-boundedness scans, pseudo-norm estimation, and
//!   distortion certificates.
//!
//! Geometry and estimators are generic over the floating point scalar via
//! [`Real`]; the aliases below fix `f64` for ordinary use.

pub mod cocycle;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod gg;
pub mod qm;
pub mod sample;
pub mod scalar;
pub mod surface;
pub mod words;

pub use error::Error;
pub use scalar::Real;

/// Result alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// `f64` point in model coordinates.
pub type Point = geom::Point2<f64>;
/// `f64` plane isometry.
pub type Iso = geom::Iso2<f64>;
/// `f64` polygon model.
pub type Model = surface::PolygonModel<f64>;
/// `f64` surface point.
pub type SurfacePoint = surface::SurfacePoint<f64>;
/// `f64` path trace.
pub type PathTrace = surface::PathTrace<f64>;
/// `f64` basepoint.
pub type Basepoint = surface::Basepoint<f64>;
/// `f64` homeomorphism word.
pub type Homeo = dynamics::Homeo<f64>;
/// `f64` quasimorphism specification.
pub type QuasimorphismSpec = qm::QuasimorphismSpec<f64>;
