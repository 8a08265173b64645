use rand::Rng;
use serde::Serialize;

use crate::symplectic::scalar::Scalar;

use super::bump::Bumped;
use super::model::{random_bumps, Geometry, Perturbation, Side, SuitableModel};
use super::periodic::{PeriodicFn, PERIODIC_SAMPLES};
use super::restore::{manifold_gap, restore_both, restore_link_a, Restoration, SolverOptions, NORM0_ORDER};
use super::splitting::{closed_form_a, closed_form_b, Splitter};
use super::LinkError;

/// Random real trigonometric polynomial on the fundamental interval of
/// `side` with `1..=harmonics` harmonics and `Σ|coefficients| ≤ amp`.
pub fn random_trig<R: Rng>(rng: &mut R, geom: &Geometry, side: Side, harmonics: usize, amp: f64, zero_mean: bool) -> PeriodicFn {
    let h = rng.gen_range(1..=harmonics.max(1));
    let mut c: f64 = if zero_mean { 0.0 } else { rng.gen_range(-1.0..1.0) };
    let mut cos: Vec<f64> = (0..h).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut sin: Vec<f64> = (0..h).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let total = c.abs() + cos.iter().chain(&sin).map(|v| v.abs()).sum::<f64>();
    let s = amp * rng.gen_range(0.5..=1.0) / total;
    c *= s;
    cos.iter_mut().chain(sin.iter_mut()).for_each(|v| *v *= s);
    PeriodicFn::trig_polynomial(geom.fundamental(side).0, geom.tau, PERIODIC_SAMPLES, c, &cos, &sin)
}

/// The correction `ρ·p` on `side`.
pub fn masked(geom: &Geometry, side: Side, p: &PeriodicFn) -> Scalar {
    Bumped::new(geom.partition(side), p.clone()).into_scalar()
}

/// `sup |M^a − cf_a|` and `sup |M^b − cf_b|` at the normal form for the
/// corrections `ρ_a p_a` and `ρ_b p_b`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClosedFormDefect {
    pub a: f64,
    pub b: f64,
}

pub fn closed_form_defect(geom: &Geometry, p_a: &PeriodicFn, p_b: &PeriodicFn) -> Result<ClosedFormDefect, LinkError> {
    let sp = Splitter::new(&SuitableModel::unperturbed(*geom)?)?;
    let sup_diff = |side: Side, psi: &Scalar, cf: &dyn Fn(f64) -> f64| -> Result<f64, LinkError> {
        let m = sp.splitting(side, psi)?;
        Ok(sp.grid(side).iter().zip(m.samples()).fold(0.0f64, |w, (x, v)| w.max((v - cf(*x)).abs())))
    };
    let psi_a = masked(geom, Side::A, p_a);
    let psi_b = masked(geom, Side::B, p_b);
    Ok(ClosedFormDefect {
        a: sup_diff(Side::A, &psi_a, &|x| closed_form_a(&psi_a, geom.tau, x))?,
        b: sup_diff(Side::B, &psi_b, &|x| closed_form_b(&psi_b, geom.tau, geom.x_b, x))?,
    })
}

/// `‖p − M^b(ρp)‖₀ / ‖p‖₀` at the normal form: the contraction of one
/// b-solver step on `p`.
pub fn contraction_factor(geom: &Geometry, p: &PeriodicFn) -> Result<f64, LinkError> {
    let sp = Splitter::new(&SuitableModel::unperturbed(*geom)?)?;
    let m = sp.splitting_b(&masked(geom, Side::B, p))?;
    Ok(p.axpy(-1.0, &m).norm0(NORM0_ORDER) / p.norm0(NORM0_ORDER))
}

/// A random bump perturbation of gradient size `size` on both correction zones.
pub fn random_model<R: Rng>(rng: &mut R, geom: &Geometry, size: f64) -> Result<SuitableModel, LinkError> {
    let bumps = random_bumps(rng, geom, &[Side::A, Side::B], size);
    SuitableModel::new(*geom, Perturbation::from_bumps(&bumps))
}

/// `|mean M^b(0)|` after link a of `model` has been restored.
pub fn mean_after_link_a(model: &SuitableModel, opts: SolverOptions) -> Result<(f64, f64), LinkError> {
    let ra = restore_link_a(model, opts)?;
    let ma = ra.apply(model)?;
    let sp = Splitter::new(&ma)?;
    let zero: Scalar = std::sync::Arc::new(crate::symplectic::scalar::Zero);
    Ok((sp.splitting_b(&zero)?.mean().abs(), ra.final_residual))
}

/// Outcome of restoring both links of one perturbed model.
#[derive(Clone, Debug)]
pub struct RestorationTrial {
    pub a: Restoration,
    pub b: Restoration,
    /// `sup |W^u − W^s|` on the fundamental intervals after both corrections.
    pub gap_a: f64,
    pub gap_b: f64,
}

pub fn restoration_trial(model: &SuitableModel, opts: SolverOptions, gap_points: usize) -> Result<RestorationTrial, LinkError> {
    let (a, b, fixed) = restore_both(model, opts)?;
    Ok(RestorationTrial { gap_a: manifold_gap(&fixed, Side::A, gap_points)?, gap_b: manifold_gap(&fixed, Side::B, gap_points)?, a, b })
}
