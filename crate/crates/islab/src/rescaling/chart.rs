use serde::{Deserialize, Serialize};

use crate::symplectic::{Jacobian2, PlanePoint};

use super::normal_form::SaddleNormalForm;
use super::transition::TransitionMap;
use super::RescalingError;

/// `R₁ = 1`, `R_{i+1} = −c_{i+1} b_i R_{i−1}` (indices mod N), unrolled in
/// the order `R₁, R₃, …, R_N, R₂, …, R_{N−1}`; the closing value
/// `R_{N+1}` must equal `R₁`.
///
/// Returned 0-based: `out[i] = R_{i+1}`.
pub fn r_sequence(b: &[f64], c: &[f64]) -> Result<Vec<f64>, RescalingError> {
    let n = b.len();
    if n != c.len() || n == 0 {
        return Err(RescalingError::Parameter("b and c must be non-empty and of equal length".into()));
    }
    if n % 2 == 0 {
        return Err(RescalingError::EvenN(n));
    }
    for (i, (bi, ci)) in b.iter().zip(c).enumerate() {
        if !((bi * ci + 1.0).abs() <= 1e-12) {
            return Err(RescalingError::BcViolation { index: i + 1, product: bi * ci });
        }
    }
    let mut r = vec![f64::NAN; n];
    r[0] = 1.0;
    let mut j = 0;
    for _ in 0..n - 1 {
        let t = (j + 2) % n;
        r[t] = -c[t] * b[(j + 1) % n] * r[j];
        j = t;
    }
    let close = -c[(j + 2) % n] * b[(j + 1) % n] * r[j];
    if !((close - 1.0).abs() <= 1e-12) {
        return Err(RescalingError::WrapAround(close));
    }
    Ok(r)
}

/// The affine charts `Q̄_i` (near `M_i⁺`) and `Q_i` (near `M_i⁻`) for one `k`.
///
/// All vectors are 0-based; index arithmetic wraps mod `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescalingChart {
    pub k: usize,
    pub lambda: f64,
    pub mu: f64,
    pub r: u32,
    pub x_plus: Vec<f64>,
    pub y_minus: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    #[serde(rename = "R")]
    pub rr: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl RescalingChart {
    pub fn new(
        k: usize,
        mu: f64,
        r: u32,
        t0: &SaddleNormalForm,
        t1: &[TransitionMap],
    ) -> Result<Self, RescalingError> {
        let lambda = t0.lambda;
        let mur = mu.powi(r as i32);
        if !(lambda.abs() < mur && mur < 1.0 && mu > 0.0) {
            return Err(RescalingError::Lamu { lambda, mu, r });
        }
        let b: Vec<f64> = t1.iter().map(|t| t.consts.b).collect();
        let c: Vec<f64> = t1.iter().map(|t| t.consts.c).collect();
        let rr = r_sequence(&b, &c)?;
        let n = t1.len();
        let x_plus: Vec<f64> = t1.iter().map(|t| t.consts.x_plus).collect();
        let y_minus: Vec<f64> = t1.iter().map(|t| t.consts.y_minus).collect();
        let lk = lambda.powi(k as i32);
        let mut beta = Vec::with_capacity(n);
        let mut gamma = Vec::with_capacity(n);
        for i in 0..n {
            beta.push(t0.xi_eta(k, x_plus[(i + n - 1) % n], y_minus[i])?.xi / lk);
            gamma.push(t0.xi_eta(k, x_plus[i], y_minus[(i + 1) % n])?.eta / lk);
        }
        let d = t1.iter().map(|t| t.d()).collect();
        Ok(Self { k, lambda, mu, r, x_plus, y_minus, b, c, d, rr, beta, gamma })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Index shifted by `s` mod N.
    pub fn at(&self, i: usize, s: isize) -> usize {
        let n = self.len() as isize;
        ((i as isize + s).rem_euclid(n)) as usize
    }

    pub fn lambda_k(&self) -> f64 {
        self.lambda.powi(self.k as i32)
    }

    pub fn mu_k(&self) -> f64 {
        self.mu.powi(self.k as i32)
    }

    /// Diagonal of `DQ̄_i`.
    fn q_bar_scale(&self, i: usize) -> (f64, f64) {
        let mk = self.mu_k();
        (self.b[i] * self.rr[self.at(i, -1)] * mk, self.lambda_k() * self.rr[i] * mk)
    }

    /// Diagonal of `DQ_i`.
    fn q_scale(&self, i: usize) -> (f64, f64) {
        let mk = self.mu_k();
        let p = self.at(i, -1);
        (self.lambda_k() * self.b[p] * self.rr[self.at(i, -2)] * mk, self.rr[p] * mk)
    }

    pub fn q_bar(&self, i: usize, p: PlanePoint) -> PlanePoint {
        let (sx, _) = self.q_bar_scale(i);
        let lk = self.lambda_k();
        let yn = self.y_minus[self.at(i, 1)];
        PlanePoint::new(self.x_plus[i] + sx * p.x, lk * (yn + self.gamma[i] + self.rr[i] * self.mu_k() * p.y))
    }

    pub fn q_bar_inv(&self, i: usize, q: PlanePoint) -> PlanePoint {
        let (sx, _) = self.q_bar_scale(i);
        let yn = self.y_minus[self.at(i, 1)];
        PlanePoint::new(
            (q.x - self.x_plus[i]) / sx,
            (q.y / self.lambda_k() - yn - self.gamma[i]) / (self.rr[i] * self.mu_k()),
        )
    }

    pub fn q(&self, i: usize, p: PlanePoint) -> PlanePoint {
        let (_, sy) = self.q_scale(i);
        let pi = self.at(i, -1);
        let inner = self.x_plus[pi] + self.beta[i] + self.b[pi] * self.rr[self.at(i, -2)] * self.mu_k() * p.x;
        PlanePoint::new(self.lambda_k() * inner, self.y_minus[i] + sy * p.y)
    }

    pub fn q_inv(&self, i: usize, q: PlanePoint) -> PlanePoint {
        let (_, sy) = self.q_scale(i);
        let pi = self.at(i, -1);
        let x = (q.x / self.lambda_k() - self.x_plus[pi] - self.beta[i]) / (self.b[pi] * self.rr[self.at(i, -2)] * self.mu_k());
        PlanePoint::new(x, (q.y - self.y_minus[i]) / sy)
    }

    pub fn q_bar_jacobian(&self, i: usize) -> Jacobian2 {
        let (a, d) = self.q_bar_scale(i);
        Jacobian2::diag(a, d)
    }

    pub fn q_jacobian(&self, i: usize) -> Jacobian2 {
        let (a, d) = self.q_scale(i);
        Jacobian2::diag(a, d)
    }

    /// `C_ik = [c_{i+1}(x_i⁺ + β_{i+1,k}) − y_{i+2}⁻ − γ_{i+1,k}] / R_{i+1}`.
    pub fn c_const(&self, i: usize) -> f64 {
        let (j, jj) = (self.at(i, 1), self.at(i, 2));
        (self.c[j] * (self.x_plus[i] + self.beta[j]) - self.y_minus[jj] - self.gamma[j]) / self.rr[j]
    }

    /// `A_i = d_{i+1} x_i⁺ R_i / R_{i+1}`.
    pub fn a_const(&self, i: usize) -> f64 {
        let j = self.at(i, 1);
        self.d[j] * self.x_plus[i] * self.rr[i] / self.rr[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rescaling::transition::{build_transition, TransitionConstants, TransitionTails};
    use proptest::prelude::*;

    #[test]
    fn r_sequence_examples() {
        assert_eq!(r_sequence(&[1.0; 3], &[-1.0; 3]).unwrap(), vec![1.0; 3]);
        assert!(matches!(r_sequence(&[1.0; 2], &[-1.0; 2]), Err(RescalingError::EvenN(2))));
        assert!(matches!(r_sequence(&[1.0, 2.0, 1.0], &[-1.0; 3]), Err(RescalingError::BcViolation { index: 2, .. })));
    }

    proptest! {
        #[test]
        fn r_sequence_closes_for_any_odd_n(bs in prop::collection::vec(0.2f64..5.0, 1..4), signs in prop::collection::vec(any::<bool>(), 7)) {
            // Odd length 1, 3, 5 or 7.
            let n = 2 * bs.len() - 1;
            let b: Vec<f64> = (0..n).map(|i| bs[i % bs.len()] * if signs[i] { 1.0 } else { -1.0 }).collect();
            let c: Vec<f64> = b.iter().map(|v| -1.0 / v).collect();
            let r = r_sequence(&b, &c).unwrap();
            for i in 0..n {
                // R_{i+1} = −c_{i+1} b_i R_{i−1}
                let lhs = r[(i + 1) % n];
                let rhs = -c[(i + 1) % n] * b[i] * r[(i + n - 1) % n];
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    fn chart() -> RescalingChart {
        let t0 = SaddleNormalForm::new(0.4, vec![0.2, 0.1]).unwrap();
        let xs = [0.004, 0.026, 0.015];
        let ys = [0.30, 0.32, 0.34];
        let t1: Vec<_> = (0..3)
            .map(|i| {
                let b = -xs[(i + 2) % 3] / 2.5;
                let c = TransitionConstants { x_plus: xs[i], y_minus: ys[i], b, c: -1.0 / b };
                build_transition(i, c, TransitionTails::default()).unwrap()
            })
            .collect();
        RescalingChart::new(10, 0.8, 2, &t0, &t1).unwrap()
    }

    #[test]
    fn charts_round_trip_and_centres() {
        let ch = chart();
        for i in 0..3 {
            let p = PlanePoint::new(0.3, -0.7);
            assert!(ch.q_bar_inv(i, ch.q_bar(i, p)).dist(p) < 1e-9);
            assert!(ch.q_inv(i, ch.q(i, p)).dist(p) < 1e-9);
            let o = ch.q_bar(i, PlanePoint::ORIGIN);
            assert!((o.x - ch.x_plus[i]).abs() < 1e-15 && o.y.abs() < 1e-3);
            let o = ch.q(i, PlanePoint::ORIGIN);
            assert!(o.x.abs() < 1e-3 && (o.y - ch.y_minus[i]).abs() < 1e-15);
            assert!(ch.beta[i].abs() > 0.0 && ch.beta[i].abs() < 1e-3);
        }
    }

    #[test]
    fn lamu_is_enforced() {
        let t0 = SaddleNormalForm::linear(0.7).unwrap();
        let t1 = vec![build_transition(0, TransitionConstants { x_plus: 0.1, y_minus: 0.3, b: 1.0, c: -1.0 }, TransitionTails::default()).unwrap()];
        assert!(matches!(RescalingChart::new(8, 0.8, 2, &t0, &t1), Err(RescalingError::Lamu { .. })));
    }
}
