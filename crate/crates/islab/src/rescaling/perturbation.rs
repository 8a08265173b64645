use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::symplectic::scalar::{smooth_transition, Polynomial, ScalarFn};
use crate::symplectic::{
    hamiltonian_time_map, Coordinates, Domain, HamiltonianSystem, Jacobian2, MapDescriptor, MapError, PlanePoint,
};

use super::chart::RescalingChart;
use super::RescalingError;

/// Midpoint steps of the time-1 flow in the cut-off collar.
pub const FLOW_STEPS: usize = 64;

/// `ψ̂(x̄) = κ₀ + κ₁ t + a·ψ(s t)` with `t = x̄ − x⁺`.
///
/// For the leg into box `j = i+1`: `κ₀ = −λ^k C_ik R_j`,
/// `κ₁ = −λ^k A_i R_j / (b_j R_i)`, `a = λ^k μ^k R_j`, `s = 1/(μ^k b_j R_i)`.
/// In the chart `Q̄_j` the shear by `ψ̂` reads `Ȳ ↦ Ȳ − μ^{−k}C_ik − A_i X̄ + ψ_i(X̄)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiHat {
    pub center: f64,
    pub constant: f64,
    pub slope: f64,
    pub amp: f64,
    pub scale: f64,
    pub psi: Polynomial,
}

impl PsiHat {
    pub fn for_leg(chart: &RescalingChart, i: usize, psi: &Polynomial) -> Self {
        let j = chart.at(i, 1);
        let (lk, mk) = (chart.lambda_k(), chart.mu_k());
        let (rj, ri) = (chart.rr[j], chart.rr[i]);
        Self {
            center: chart.x_plus[j],
            constant: -lk * chart.c_const(i) * rj,
            slope: -lk * chart.a_const(i) * rj / (chart.b[j] * ri),
            amp: lk * mk * rj,
            scale: 1.0 / (mk * chart.b[j] * ri),
            psi: psi.clone(),
        }
    }

    /// `Ψ` with `Ψ′ = ψ̂` and `Ψ(x⁺) = 0`, and `ψ̂`, `ψ̂′`.
    pub fn potential(&self, xbar: f64) -> (f64, f64, f64) {
        let t = xbar - self.center;
        let st = self.scale * t;
        let prim = Polynomial::new(
            std::iter::once(0.0).chain(self.psi.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64)).collect(),
        );
        (
            self.constant * t + 0.5 * self.slope * t * t + self.amp / self.scale * prim.value(st),
            self.constant + self.slope * t + self.amp * self.psi.value(st),
            self.slope + self.amp * self.scale * self.psi.deriv(st),
        )
    }

    pub fn value(&self, xbar: f64) -> f64 {
        self.potential(xbar).1
    }

    pub fn sup_on(&self, half_width: f64) -> f64 {
        (0..=200)
            .map(|k| self.value(self.center - half_width + 2.0 * half_width * k as f64 / 200.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `1` on `|t| ≤ δ/2`, `0` on `|t| ≥ δ`, with two derivatives.
fn plateau(t: f64, delta: f64) -> (f64, f64, f64) {
    let h = 0.5 * delta;
    let (s, s1, s2) = smooth_transition((t.abs() - h) / h);
    let sg = t.signum();
    (1.0 - s, -s1 * sg / h, -s2 / (h * h))
}

/// The map `g`: time-1 flow of `H = −Ψ(x̄)ρ(x̄, ȳ)` on each box
/// `V_j = [x_j⁺ − δ, x_j⁺ + δ] × [−δ, δ]`, identity elsewhere. On the inner
/// boxes `V_j′` (half-width `δ/2`) the flow is the shear by `ψ̂_j`, which
/// is evaluated in closed form.
#[derive(Clone, Debug)]
pub struct RescalingPerturbation {
    pub delta: f64,
    /// Indexed by box `j`; box `j` carries `ψ̂` built from `ψ_{j−1}`.
    pub hats: Vec<PsiHat>,
    flows: Vec<MapDescriptor>,
}

fn box_flow(hat: &PsiHat, delta: f64) -> MapDescriptor {
    let c = hat.center;
    let (h0, h1, h2) = (hat.clone(), hat.clone(), hat.clone());
    let sys = HamiltonianSystem::new(
        move |x, y| -h0.potential(x).0 * plateau(x - c, delta).0 * plateau(y, delta).0,
        move |x, y| {
            let (p, ps, _) = h1.potential(x);
            let (rx, rx1, _) = plateau(x - c, delta);
            let (ry, ry1, _) = plateau(y, delta);
            [-(ps * rx * ry + p * rx1 * ry), -p * rx * ry1]
        },
        move |x, y| {
            let (p, ps, ps1) = h2.potential(x);
            let (rx, rx1, rx2) = plateau(x - c, delta);
            let (ry, ry1, ry2) = plateau(y, delta);
            let hxx = -(ps1 * rx * ry + 2.0 * ps * rx1 * ry + p * rx2 * ry);
            let hxy = -(ps * rx * ry1 + p * rx1 * ry1);
            [[hxx, hxy], [hxy, -p * rx * ry2]]
        },
        Coordinates::Cartesian,
    )
    .with_steps(FLOW_STEPS);
    hamiltonian_time_map(&sys, 1.0)
}

/// Build `g` from the chart at one `k` and the functions `ψ_1..ψ_N`.
pub fn build_perturbation(
    chart: &RescalingChart,
    psis: &[Polynomial],
    delta: f64,
) -> Result<RescalingPerturbation, RescalingError> {
    let n = chart.len();
    if psis.len() != n {
        return Err(RescalingError::Parameter(format!("expected {n} functions ψ_i, got {}", psis.len())));
    }
    if !(delta > 0.0) {
        return Err(RescalingError::Parameter("box half-width δ must be positive".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (chart.x_plus[i] - chart.x_plus[j]).abs() < 2.0 * delta {
                return Err(RescalingError::BoxesOverlap { i: i + 1, j: j + 1 });
            }
        }
    }
    let hats: Vec<PsiHat> = (0..n).map(|j| PsiHat::for_leg(chart, chart.at(j, -1), &psis[chart.at(j, -1)])).collect();
    let flows = hats.iter().map(|h| box_flow(h, delta)).collect();
    Ok(RescalingPerturbation { delta, hats, flows })
}

impl RescalingPerturbation {
    /// Box containing `p`, if any.
    pub fn box_of(&self, p: PlanePoint) -> Option<usize> {
        self.hats.iter().position(|h| (p.x - h.center).abs() < self.delta && p.y.abs() < self.delta)
    }

    /// True when `p` and its shear image both lie in the inner box `j`.
    pub fn in_inner(&self, j: usize, p: PlanePoint) -> bool {
        let h = &self.hats[j];
        let w = 0.5 * self.delta;
        (p.x - h.center).abs() <= w && p.y.abs() <= w && (p.y + h.value(p.x)).abs() <= w
    }

    pub fn step(&self, p: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        let Some(j) = self.box_of(p) else { return Ok((p, Jacobian2::IDENTITY)) };
        if self.in_inner(j, p) {
            let (_, v, dv) = self.hats[j].potential(p.x);
            return Ok((PlanePoint::new(p.x, p.y + v), Jacobian2::new(1.0, 0.0, dv, 1.0)));
        }
        self.flows[j].step(p)
    }

    pub fn inverse(&self, q: PlanePoint) -> Result<PlanePoint, MapError> {
        let Some(j) = self.box_of(q) else { return Ok(q) };
        let back = PlanePoint::new(q.x, q.y - self.hats[j].value(q.x));
        if self.in_inner(j, back) {
            return Ok(back);
        }
        self.flows[j].exact_inverse(q).expect("flow maps carry an inverse")
    }

    pub fn map(&self) -> MapDescriptor {
        let (a, b) = (Arc::new(self.clone()), Arc::new(self.clone()));
        MapDescriptor::new("g", Domain::Plane, true, move |p| a.step(p)).with_inverse(move |q| b.inverse(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rescaling::verify::RescalingModel;

    fn setup(k: usize) -> (RescalingChart, RescalingPerturbation) {
        let m = RescalingModel::nonlinear_default();
        let ch = m.chart(k).unwrap();
        let psis = vec![
            Polynomial::new(vec![0.05, -0.1, 0.08]),
            Polynomial::new(vec![-0.02, 0.03, -0.1]),
            Polynomial::new(vec![0.0, 0.1, 0.05]),
        ];
        let g = build_perturbation(&ch, &psis, m.box_delta).unwrap();
        (ch, g)
    }

    #[test]
    fn identity_outside_and_shear_inside() {
        let (ch, g) = setup(8);
        let f = g.map();
        for p in [PlanePoint::new(0.5, 0.5), PlanePoint::new(ch.x_plus[0], 0.011), PlanePoint::new(-0.01, 0.0)] {
            assert_eq!(f.eval(p).unwrap(), p);
        }
        for j in 0..3 {
            let h = &g.hats[j];
            let p = PlanePoint::new(h.center + 0.001, 1e-4);
            let q = f.eval(p).unwrap();
            assert!((q.y - p.y - h.value(p.x)).abs() <= 1e-15 && q.x == p.x);
            // The integrated flow agrees with the closed form inside V′.
            let z = g.flows[j].eval(p).unwrap();
            assert!(z.dist(q) < 1e-10, "{}", z.dist(q));
        }
    }

    #[test]
    fn collar_flow_is_symplectic_and_invertible() {
        let (_, g) = setup(8);
        let f = g.map();
        let h = &g.hats[1];
        for (dx, y) in [(0.004, 0.0), (-0.0035, 0.003), (0.001, -0.0042), (0.0049, 0.0049)] {
            let p = PlanePoint::new(h.center + dx, y);
            let (q, j) = f.step(p).unwrap();
            assert!((j.det() - 1.0).abs() < 1e-9);
            assert!(f.exact_inverse(q).unwrap().unwrap().dist(p) < 1e-12);
        }
    }

    #[test]
    fn psi_hat_shrinks_with_k() {
        let (_, a) = setup(8);
        let (_, b) = setup(10);
        for j in 0..3 {
            let (ca, cb) = (a.hats[j].constant.abs(), b.hats[j].constant.abs());
            assert!(cb / ca <= 0.16 * 1.1, "{}", cb / ca);
            assert!(b.hats[j].sup_on(0.0025) < a.hats[j].sup_on(0.0025));
        }
    }

    #[test]
    fn overlapping_boxes_rejected() {
        let m = RescalingModel::nonlinear_default();
        let ch = m.chart(8).unwrap();
        let psis = vec![Polynomial::new(vec![0.0]); 3];
        assert!(matches!(build_perturbation(&ch, &psis, 0.008), Err(RescalingError::BoxesOverlap { .. })));
    }
}
