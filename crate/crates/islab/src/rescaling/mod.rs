//! Renormalised iterates near a homoclinic band.
//!
//! A saddle normal form `T₀` and `N` transition maps `T₁⁽ⁱ⁾` carry points
//! from near `M_i⁺ = (x_i⁺, 0)` on the stable axis to near `M_{i+1}⁻ = (0,
//! y_{i+1}⁻)` and back out. In the affine charts `Q̄_i` each round
//! `g∘T₁∘T₀^k` is a Hénon-like map up to an error that vanishes with `k`.

mod chart;
mod corollary;
mod normal_form;
mod perturbation;
mod transition;
mod verify;

pub use chart::{r_sequence, RescalingChart};
pub use corollary::{corollary_composition, CorollaryPair};
pub use normal_form::{SaddleNormalForm, XiEta};
pub use perturbation::{build_perturbation, PsiHat, RescalingPerturbation, FLOW_STEPS};
pub use transition::{build_transition, TransitionConstants, TransitionMap, TransitionTails};
pub use verify::{
    disc_grid, henon_product, phi_maps, pointwise_error, random_quadratics, verify_rescaling, KRow, LegReport, Renormalized,
    RescalingModel, RescalingReport, DEFAULT_KAPPA, DEFAULT_X_PLUS, DEFAULT_Y_MINUS,
};

use crate::symplectic::{MapError, PlanePoint};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RescalingError {
    #[error("N = {0} is even; the R-recursion closes only for odd N")]
    EvenN(usize),
    #[error("b_{index}·c_{index} = {product}, expected −1")]
    BcViolation { index: usize, product: f64 },
    #[error("R-recursion does not close: R_(N+1) = {0}")]
    WrapAround(f64),
    #[error("need |λ| < μ^r < 1, got λ = {lambda}, μ = {mu}, r = {r}")]
    Lamu { lambda: f64, mu: f64, r: u32 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("fixed point for T₀^k (k = {k}) diverged at ({x}, {y})")]
    FixedPointDivergence { k: usize, x: f64, y: f64 },
    #[error("boxes around M_{i}⁺ and M_{j}⁺ overlap")]
    BoxesOverlap { i: usize, j: usize },
    #[error("leg {leg}: point {point:?} leaves {region}")]
    Escape { leg: usize, point: PlanePoint, region: &'static str },
    #[error("the shear composition needs an even number of prefix functions, got {0}")]
    OddPrefix(usize),
    #[error(transparent)]
    Map(#[from] MapError),
}
