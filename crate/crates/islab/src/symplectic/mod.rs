//! Points, Jacobians, map descriptors, Hamiltonian time maps and the named maps.

mod hamiltonian;
mod jacobian;
mod map;
pub mod maps;
mod point;
mod saddle;
pub mod scalar;

pub use hamiltonian::{hamiltonian_time_map, Coordinates, HamiltonianSystem, IntegratorOrder};
pub use jacobian::{Eigenvalues, Jacobian2};
pub use map::{
    chain, compose, default_fd_step, finite_difference_jacobian, invert_at, Domain, MapDescriptor, MapError, Rect,
    INVERT_MAX_ITER, INVERT_TOL,
};
pub use saddle::SaddleData;
pub use point::{wrap_centered, wrap_unit, PlanePoint, TorusPoint};
