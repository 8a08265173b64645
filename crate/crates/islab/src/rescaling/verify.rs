use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symplectic::scalar::{Polynomial, ScalarFn};
use crate::symplectic::PlanePoint;

use super::chart::RescalingChart;
use super::normal_form::SaddleNormalForm;
use super::perturbation::{build_perturbation, RescalingPerturbation};
use super::transition::{build_transition, TransitionConstants, TransitionMap, TransitionTails};
use super::RescalingError;

/// Saddle, transitions and scaling constants of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescalingModel {
    pub normal_form: SaddleNormalForm,
    pub transitions: Vec<TransitionMap>,
    pub mu: f64,
    pub r: u32,
    /// Half-width of the perturbation boxes `V_i`.
    pub box_delta: f64,
    /// Half-width of the square on which `T₀` is trusted.
    pub alpha: f64,
}

/// `x_i⁺` of the default configurations.
pub const DEFAULT_X_PLUS: [f64; 3] = [0.004, 0.026, 0.015];
/// `y_i⁻` of the default configurations.
pub const DEFAULT_Y_MINUS: [f64; 3] = [0.30, 0.32, 0.34];
/// `c_{i+1} x_i⁺` in the default configurations.
pub const DEFAULT_KAPPA: f64 = 2.5;

impl RescalingModel {
    /// Build from explicit per-index data, checking every constraint.
    pub fn new(
        normal_form: SaddleNormalForm,
        consts: &[TransitionConstants],
        tails: &[TransitionTails],
        mu: f64,
        r: u32,
        box_delta: f64,
    ) -> Result<Self, RescalingError> {
        if consts.len() != tails.len() {
            return Err(RescalingError::Parameter("one tail set per transition is required".into()));
        }
        if consts.len() % 2 == 0 {
            return Err(RescalingError::EvenN(consts.len()));
        }
        let transitions =
            consts.iter().zip(tails).enumerate().map(|(i, (c, t))| build_transition(i + 1, *c, *t)).collect::<Result<_, _>>()?;
        let m = Self { normal_form, transitions, mu, r, box_delta, alpha: 0.5 };
        m.chart(1)?;
        Ok(m)
    }

    /// Constants `b_i = −x_{i−1}⁺/κ`, `c_i = −1/b_i`, so that
    /// `c_{i+1} x_i⁺ = κ` for every leg.
    pub fn constants_from(x_plus: &[f64], y_minus: &[f64], kappa: f64) -> Vec<TransitionConstants> {
        let n = x_plus.len();
        (0..n)
            .map(|i| {
                let b = -x_plus[(i + n - 1) % n] / kappa;
                TransitionConstants { x_plus: x_plus[i], y_minus: y_minus[i], b, c: -1.0 / b }
            })
            .collect()
    }

    pub fn default_constants() -> Vec<TransitionConstants> {
        Self::constants_from(&DEFAULT_X_PLUS, &DEFAULT_Y_MINUS, DEFAULT_KAPPA)
    }

    /// Linear saddle, affine transitions: every leg is exactly Hénon-like.
    pub fn affine_default() -> Self {
        let t0 = SaddleNormalForm::linear(0.4).expect("valid");
        Self::new(t0, &Self::default_constants(), &[TransitionTails::default(); 3], 0.8, 2, 0.005).expect("valid defaults")
    }

    /// Cubic saddle and nonlinear transitions.
    pub fn nonlinear_default() -> Self {
        let t0 = SaddleNormalForm::new(0.4, vec![0.2, 0.1]).expect("valid");
        let tails = [
            TransitionTails { beta2: 0.2, beta3: -0.1, g2: 0.1, g3: 0.02 },
            TransitionTails { beta2: -0.15, beta3: 0.1, g2: -0.08, g3: 0.03 },
            TransitionTails { beta2: 0.1, beta3: 0.05, g2: 0.12, g3: -0.02 },
        ];
        Self::new(t0, &Self::default_constants(), &tails, 0.8, 2, 0.005).expect("valid defaults")
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn chart(&self, k: usize) -> Result<RescalingChart, RescalingError> {
        RescalingChart::new(k, self.mu, self.r, &self.normal_form, &self.transitions)
    }

    /// Number of iterates `n = N(k s + m)` with `s = m = 1`.
    pub fn iterates(&self, k: usize) -> usize {
        self.len() * (k + 1)
    }
}

/// One `k` of a verification sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub k: usize,
    pub n: usize,
    /// `sup |Q̄₁⁻¹∘f̂ⁿ∘Q̄₁ − H_{ψ_N}∘…∘H_{ψ_1}|` over the grid.
    pub error: f64,
    /// `max_i sup |Φ_i − id|` over the grid.
    pub phi_defect: f64,
    pub legs: Vec<LegReport>,
    /// `sup |ψ̂_j|` over the inner boxes.
    pub psi_hat_sup: Vec<f64>,
    /// The constant terms `κ₀` of `ψ̂_j`.
    pub psi_hat_constant: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegReport {
    pub leg: usize,
    pub phi_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescalingReport {
    pub rows: Vec<KRow>,
}

/// `count` points of the closed unit disc on a sunflower spiral.
pub fn disc_grid(count: usize) -> Vec<PlanePoint> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let r = ((i as f64 + 0.5) / count as f64).sqrt();
            let t = golden * i as f64;
            PlanePoint::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

/// `count` quadratics with coefficients uniform in `[−amp, amp]`.
pub fn random_quadratics<R: Rng>(rng: &mut R, count: usize, amp: f64) -> Vec<Polynomial> {
    (0..count).map(|_| Polynomial::new((0..3).map(|_| rng.gen_range(-amp..=amp)).collect())).collect()
}

/// `H_{ψ_N}∘…∘H_{ψ_1}(p)`.
pub fn henon_product(psis: &[Polynomial], p: PlanePoint) -> PlanePoint {
    psis.iter().fold(p, |q, psi| PlanePoint::new(q.y, -q.x + psi.value(q.y)))
}

/// The renormalised dynamics at one `k` for fixed `ψ_i`.
pub struct Renormalized<'a> {
    model: &'a RescalingModel,
    pub chart: RescalingChart,
    pub g: RescalingPerturbation,
}

impl<'a> Renormalized<'a> {
    pub fn new(model: &'a RescalingModel, k: usize, psis: &[Polynomial]) -> Result<Self, RescalingError> {
        let chart = model.chart(k)?;
        let g = build_perturbation(&chart, psis, model.box_delta)?;
        Ok(Self { model, chart, g })
    }

    /// `Q̄_{i+1}⁻¹∘g∘T₁⁽ⁱ⁺¹⁾∘T₀^k∘Q̄_i`, i.e. `k + 1` iterates of `f̂`.
    pub fn leg(&self, i: usize, p: PlanePoint) -> Result<PlanePoint, RescalingError> {
        let ch = &self.chart;
        let alpha = self.model.alpha;
        let mut z = ch.q_bar(i, p);
        for _ in 0..ch.k {
            z = self.model.normal_form.flow(z, 1.0).0;
            if !(z.x.abs() <= alpha && z.y.abs() <= alpha) {
                return Err(RescalingError::Escape { leg: i + 1, point: p, region: "the saddle neighbourhood" });
            }
        }
        let j = ch.at(i, 1);
        let z = self.model.transitions[j].step(z).0;
        if !self.g.in_inner(j, z) {
            return Err(RescalingError::Escape { leg: i + 1, point: p, region: "the inner perturbation box" });
        }
        let z = self.g.step(z)?.0;
        Ok(ch.q_bar_inv(j, z))
    }

    /// `Q̄₁⁻¹∘f̂ⁿ∘Q̄₁(p)`.
    pub fn full(&self, p: PlanePoint) -> Result<PlanePoint, RescalingError> {
        (0..self.chart.len()).try_fold(p, |q, i| self.leg(i, q))
    }

    /// `Φ_i = H_{ψ_i}⁻¹∘leg_i`.
    pub fn phi(&self, i: usize, psi: &Polynomial, p: PlanePoint) -> Result<PlanePoint, RescalingError> {
        let q = self.leg(i, p)?;
        Ok(PlanePoint::new(psi.value(q.x) - q.y, q.x))
    }
}

/// Pointwise `|Q̄₁⁻¹∘f̂ⁿ∘Q̄₁ − H-product|` on a grid.
pub fn pointwise_error(
    model: &RescalingModel,
    k: usize,
    psis: &[Polynomial],
    grid: &[PlanePoint],
) -> Result<Vec<f64>, RescalingError> {
    let rn = Renormalized::new(model, k, psis)?;
    grid.par_iter().map(|&p| Ok(rn.full(p)?.dist(henon_product(psis, p)))).collect()
}

/// Empirical `Φ_i(p)` for every leg and grid point.
pub fn phi_maps(
    model: &RescalingModel,
    k: usize,
    psis: &[Polynomial],
    grid: &[PlanePoint],
) -> Result<Vec<Vec<PlanePoint>>, RescalingError> {
    let rn = Renormalized::new(model, k, psis)?;
    (0..model.len()).map(|i| grid.par_iter().map(|&p| rn.phi(i, &psis[i], p)).collect()).collect()
}

/// `E(k)`, `Φ`-defects and `ψ̂` sizes over a list of `k`.
pub fn verify_rescaling(
    model: &RescalingModel,
    ks: &[usize],
    psis: &[Polynomial],
    grid: &[PlanePoint],
) -> Result<RescalingReport, RescalingError> {
    if psis.len() != model.len() {
        return Err(RescalingError::Parameter(format!("expected {} functions ψ_i, got {}", model.len(), psis.len())));
    }
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let error = pointwise_error(model, k, psis, grid)?.into_iter().fold(0.0, f64::max);
        let phis = phi_maps(model, k, psis, grid)?;
        let legs: Vec<LegReport> = phis
            .iter()
            .enumerate()
            .map(|(i, v)| LegReport {
                leg: i + 1,
                phi_defect: v.iter().zip(grid).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max),
            })
            .collect();
        let rn = Renormalized::new(model, k, psis)?;
        rows.push(KRow {
            k,
            n: model.iterates(k),
            error,
            phi_defect: legs.iter().map(|l| l.phi_defect).fold(0.0, f64::max),
            legs,
            psi_hat_sup: rn.g.hats.iter().map(|h| h.sup_on(0.5 * model.box_delta)).collect(),
            psi_hat_constant: rn.g.hats.iter().map(|h| h.constant).collect(),
        });
    }
    Ok(RescalingReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn psis(seed: u64) -> Vec<Polynomial> {
        random_quadratics(&mut ChaCha8Rng::seed_from_u64(seed), 3, 0.1)
    }

    #[test]
    fn affine_configuration_is_exact() {
        let m = RescalingModel::affine_default();
        let grid = disc_grid(200);
        let rep = verify_rescaling(&m, &[8, 10, 12, 14], &psis(1), &grid).unwrap();
        for row in &rep.rows {
            assert!(row.error <= 1e-9, "k = {}: {:e}", row.k, row.error);
            assert!(row.phi_defect <= 1e-9);
        }
    }

    #[test]
    fn nonlinear_error_decreases() {
        let m = RescalingModel::nonlinear_default();
        let grid = disc_grid(200);
        let rep = verify_rescaling(&m, &[8, 10, 12, 14], &psis(2), &grid).unwrap();
        let e: Vec<f64> = rep.rows.iter().map(|r| r.error).collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
        assert!(e[3] <= 0.05, "{e:?}");
    }

    #[test]
    fn phi_is_independent_of_psi() {
        let m = RescalingModel::nonlinear_default();
        let grid = disc_grid(50);
        let a = phi_maps(&m, 10, &psis(3), &grid).unwrap();
        let b = phi_maps(&m, 10, &psis(4), &grid).unwrap();
        for (u, v) in a.iter().zip(&b) {
            for (p, q) in u.iter().zip(v) {
                assert!(p.dist(*q) <= 1e-9);
            }
        }
    }

    #[test]
    fn disc_grid_is_inside() {
        let g = disc_grid(1000);
        assert_eq!(g.len(), 1000);
        assert!(g.iter().all(|p| p.norm() <= 1.0));
    }
}
