//! Splitting of heteroclinic links in the two-strip model and the
//! fixed-point solvers that restore them.
//!
//! The model carries a piecewise normal form `F̊` (translations along the
//! strips and a contracting excursion) and a symplectic perturbation `G`;
//! the map is `F = G∘F̊`. Splitting functions are computed by pushing the
//! unperturbed inflow segments through composite maps and reading the
//! images as graphs in time-energy charts.

mod bump;
mod chart;
mod curve;
mod manifold;
mod model;
mod periodic;
mod restore;
mod splitting;
mod verify;

pub use bump::{Bumped, PartitionBump};
pub use chart::{TimeEnergyChart, SIGMA_STEPS};
pub use curve::{graph_transform, GraphCurve, ImageCurve, CURVE_SAMPLES};
pub use manifold::{manifold_grow, Branch, ManifoldArc};
pub use model::{random_bumps, BumpHamiltonian, Geometry, Perturbation, Side, SuitableModel};
pub use periodic::{PeriodicFn, SampledFunction, PERIODIC_SAMPLES};
pub use restore::{
    manifold_gap, restore_both, restore_link_a, restore_link_b, Restoration, SolverOptions, TraceRow, NORM0_ORDER,
};
pub use splitting::{closed_form_a, closed_form_b, splitting_a, splitting_b, Splitter, LINK_INTACT_TOL};
pub use verify::{
    closed_form_defect, contraction_factor, masked, mean_after_link_a, random_model, random_trig, restoration_trial,
    ClosedFormDefect, RestorationTrial,
};

use crate::symplectic::MapError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("inconsistent geometry: {0}")]
    Geometry(String),
    #[error("curve is not a graph over x near parameter {x}")]
    Transversality { x: f64 },
    #[error("abscissa {x} outside the curve range [{lo}, {hi}]")]
    OutsideCurve { x: f64, lo: f64, hi: f64 },
    #[error("correction is {value:e} at x = {x}, outside its support zone")]
    SupportViolation { x: f64, value: f64 },
    #[error("root solve for abscissa {x} did not converge")]
    RootFailure { x: f64 },
    #[error("link a is broken: sup|M^a| = {0:e}")]
    LinkABroken(f64),
    #[error("mean of M^b is {mean:e} at iteration {iteration}")]
    MeanDrift { iteration: usize, mean: f64 },
    #[error("residual ratio {ratio} ≥ 1 at iteration {iteration}")]
    NonContraction { iteration: usize, ratio: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("blended chart is not invertible at ({x}, {y})")]
    ChartNotInvertible { x: f64, y: f64 },
    #[error(transparent)]
    Map(#[from] MapError),
}
