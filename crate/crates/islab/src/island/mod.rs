//! The blown-up cat map: four fixed points of the cat map are replaced by
//! circles, each a heteroclinic 4-link of saddles, leaving a stochastic island.

mod map;
mod polar;
mod profile;
mod report;
mod surgery;

pub use map::{IslandMap, Regime, CENTERS};
pub use polar::{plane_to_polar_jacobian, polar_chart, polar_to_plane, polar_to_plane_jacobian, PolarPoint};
pub use profile::SurgeryProfile;
pub use report::{blowup_point, link_saddles, r2_point, symmetry_and_identity_report, LinkSaddle, SymmetryReport};
pub use surgery::{surgery_inverse, surgery_map, surgery_radius};

use crate::symplectic::MapError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IslandError {
    #[error("invalid surgery profile: {0}")]
    InvalidProfile(String),
    #[error("cat map differs from the local hyperbolic flow by {0:e} on the collar boundary")]
    FlowMismatch(f64),
    #[error("saddle search on link {link}: {reason}")]
    Saddle { link: usize, reason: String },
    #[error(transparent)]
    Map(#[from] MapError),
}
