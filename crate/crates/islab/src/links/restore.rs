use serde::{Deserialize, Serialize};

use crate::symplectic::scalar::Scalar;
use crate::symplectic::PlanePoint;

use super::bump::Bumped;
use super::curve::ImageCurve;
use super::model::{Side, SuitableModel};
use super::periodic::{PeriodicFn, PERIODIC_SAMPLES};
use super::splitting::{Splitter, LINK_INTACT_TOL};
use super::LinkError;

/// Derivative orders in the norm of the b-solver.
pub const NORM0_ORDER: u32 = 2;

/// Stopping rule of the fixed-point solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Largest tolerated `|mean M^b|` during the b-iteration.
    pub mean_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 50, mean_tol: 1e-6 }
    }
}

/// One row of a solver trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub sup_residual: f64,
    pub norm0_residual: f64,
}

/// Result of a link restoration.
#[derive(Clone, Debug)]
pub struct Restoration {
    pub side: Side,
    /// Periodic solution `ψ̃*`.
    pub psi_tilde: PeriodicFn,
    /// Applied correction `ψ = ρ·ψ̃*`.
    pub psi: Bumped,
    pub trace: Vec<TraceRow>,
    /// Number of updates `ψ̃ ← ψ̃ − M_ρ(ψ̃)` performed.
    pub iterations: usize,
    pub final_residual: f64,
}

impl Restoration {
    pub fn correction(&self) -> Scalar {
        self.psi.clone().into_scalar()
    }

    /// The model `S_ψ∘F` with this correction applied.
    pub fn apply(&self, model: &SuitableModel) -> Result<SuitableModel, LinkError> {
        let (lo, hi) = model.geometry().support_zone(self.side);
        model.with_perturbation(model.perturbation().then_shear(self.correction(), lo, hi))
    }
}

fn solve(model: &SuitableModel, side: Side, opts: SolverOptions) -> Result<Restoration, LinkError> {
    let g = *model.geometry();
    let sp = Splitter::new(model)?;
    if side == Side::B {
        let d = sp.link_a_defect()?;
        if d > LINK_INTACT_TOL {
            return Err(LinkError::LinkABroken(d));
        }
    }
    let rho = g.partition(side);
    let (x0, _) = g.fundamental(side);
    let mut psi_t = PeriodicFn::zero(x0, g.tau, PERIODIC_SAMPLES);
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let psi = Bumped::new(rho, psi_t.clone()).into_scalar();
        let m = sp.splitting(side, &psi)?;
        if side == Side::B && m.mean().abs() > opts.mean_tol {
            return Err(LinkError::MeanDrift { iteration: iterations, mean: m.mean() });
        }
        let row = TraceRow { iter: iterations, sup_residual: m.sup(), norm0_residual: m.norm0(NORM0_ORDER) };
        let measure = |r: &TraceRow| match side {
            Side::A => r.sup_residual,
            Side::B => r.norm0_residual,
        };
        if let Some(prev) = trace.last() {
            let ratio = measure(&row) / measure(prev);
            if ratio >= 1.0 && row.sup_residual > opts.tol {
                trace.push(row);
                return Err(LinkError::NonContraction { iteration: iterations, ratio });
            }
        }
        trace.push(row);
        if row.sup_residual <= opts.tol {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(LinkError::NotConverged { iterations, residual: row.sup_residual });
        }
        psi_t = psi_t.axpy(-1.0, &m);
        if side == Side::B {
            psi_t = psi_t.zero_mean();
        }
        iterations += 1;
    }
    let final_residual = trace.last().map_or(0.0, |r| r.sup_residual);
    Ok(Restoration { side, psi: Bumped::new(rho, psi_t.clone()), psi_tilde: psi_t, trace, iterations, final_residual })
}

/// Solve `M^a(S_ψ∘F) = 0` by `ψ̃ ← ψ̃ − M^a(ρψ̃)`.
pub fn restore_link_a(model: &SuitableModel, opts: SolverOptions) -> Result<Restoration, LinkError> {
    solve(model, Side::A, opts)
}

/// Solve `M^b(S_ψ∘F) = 0` over zero-mean `ψ̃`; link a must be intact.
pub fn restore_link_b(model: &SuitableModel, opts: SolverOptions) -> Result<Restoration, LinkError> {
    solve(model, Side::B, opts)
}

/// Restore a, then b on the a-restored map; returns both results and the
/// final model.
pub fn restore_both(
    model: &SuitableModel,
    opts: SolverOptions,
) -> Result<(Restoration, Restoration, SuitableModel), LinkError> {
    let ra = restore_link_a(model, opts)?;
    let ma = ra.apply(model)?;
    let rb = restore_link_b(&ma, opts)?;
    let mb = rb.apply(&ma)?;
    Ok((ra, rb, mb))
}

/// `sup |W^u − W^s|` over the fundamental interval of `side`, measured in
/// the original coordinates (no chart) on `n` points.
pub fn manifold_gap(model: &SuitableModel, side: Side, n: usize) -> Result<f64, LinkError> {
    let g = model.geometry();
    let m = 0.5 * g.delta;
    let (wu, ws) = match side {
        Side::A => {
            let fi = model.f_a_inv();
            (
                ImageCurve::new(model.f_a(), g.y1, g.x_a - m, g.x_a + g.tau + m, 33)?,
                ImageCurve::new(
                    crate::symplectic::chain(&[fi.clone(), fi]),
                    g.y1,
                    g.x_a - 3.0 * g.tau - m,
                    g.x_a - 2.0 * g.tau + m,
                    33,
                )?,
            )
        }
        Side::B => {
            let fy = model.f_y2_inv();
            let back = crate::symplectic::chain(&[fy.clone(), fy.clone(), fy, model.f_excursion_inv(), model.f_b_inv()]);
            (
                ImageCurve::new(model.f_b(), g.y1, g.x_b - g.tau - m, g.x_b + m, 33)?,
                ImageCurve::new(back, g.y2, g.x_b - m, g.x_b + 0.5 * g.tau + m, 33)?,
            )
        }
    };
    let (x0, _) = g.fundamental(side);
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let x = x0 + g.tau * k as f64 / n as f64;
        let p: PlanePoint = wu.point_at(x)?;
        let q: PlanePoint = ws.point_at(x)?;
        worst = worst.max((p.y - q.y).abs());
    }
    Ok(worst)
}
