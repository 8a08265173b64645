//! Numerical laboratory for area-preserving surface dynamics.
//!
//! The crate is organised around [`MapDescriptor`], an evaluable planar or
//! toral map carrying its analytic Jacobian. On top of it sit:
//!
//! * [`island`]: the blown-up Anosov map with its heteroclinic 4-links,
//! * [`lyapunov`]: finite-time exponents, grid entropy and cone certificates,
//! * [`links`]: splitting functions of heteroclinic links and the solvers
//!   that restore them,
//! * [`rescaling`]: renormalised iterates near a homoclinic band and their
//!   Hénon-product limit,
//! * [`cli`]: config parsing and the suite runner behind the `islab` binary.

pub mod cli;
pub mod island;
pub mod links;
pub mod lyapunov;
pub mod rescaling;
pub mod symplectic;

pub use symplectic::{
    compose, finite_difference_jacobian, invert_at, Domain, Jacobian2, MapDescriptor, MapError,
    PlanePoint, Rect, TorusPoint,
};
