use serde::{Deserialize, Serialize};

use crate::symplectic::{Domain, Jacobian2, MapDescriptor, PlanePoint};

use super::RescalingError;

/// Saddle normal form `T₀(x, y) = (x e^{w(xy)}, y e^{−w(xy)})` with
/// `w(u) = ln λ + a₁u + a₂u² + …`.
///
/// This is the time-1 map of `H = h(xy)` with `h′ = w`, so `xy` is
/// conserved and `T₀^k` has the closed form with `k·w`. The x-axis is the
/// stable direction: `x̄ = λx + p(x, y)x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleNormalForm {
    pub lambda: f64,
    /// `a₁, a₂, …`; empty for the linear saddle.
    pub coeffs: Vec<f64>,
}

/// Solution of `T₀^k(x̄, ȳ) = (x, y)` for given `(x̄, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiEta {
    /// Exit abscissa `x = λ^k x̄ + ξ_k`.
    pub x: f64,
    /// Entry ordinate `ȳ = λ^k y + η_k`.
    pub ybar: f64,
    pub xi: f64,
    pub eta: f64,
}

const FIXED_POINT_ITERS: usize = 200;

impl SaddleNormalForm {
    pub fn new(lambda: f64, coeffs: Vec<f64>) -> Result<Self, RescalingError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(RescalingError::Parameter(format!("λ = {lambda} must lie in (0, 1)")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(RescalingError::Parameter("normal-form coefficients must be finite".into()));
        }
        Ok(Self { lambda, coeffs })
    }

    pub fn linear(lambda: f64) -> Result<Self, RescalingError> {
        Self::new(lambda, Vec::new())
    }

    pub fn is_linear(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `w(u)` and `w′(u)`.
    pub fn exponent(&self, u: f64) -> (f64, f64) {
        let mut w = 0.0;
        let mut dw = 0.0;
        for (j, &a) in self.coeffs.iter().enumerate().rev() {
            // Horner on Σ a_j u^(j+1), j from 0.
            w = (w + a) * u;
            dw = dw * u + (j + 1) as f64 * a;
        }
        (self.lambda.ln() + w, dw)
    }

    /// `(p, q)` of `x̄ = λx + p x`, `ȳ = λ⁻¹y + q y`.
    pub fn pq(&self, x: f64, y: f64) -> (f64, f64) {
        let (w, _) = self.exponent(x * y);
        (w.exp() - self.lambda, (-w).exp() - 1.0 / self.lambda)
    }

    /// `T₀^t` for real `t` (closed form) with its Jacobian.
    pub fn flow(&self, p: PlanePoint, t: f64) -> (PlanePoint, Jacobian2) {
        let u = p.x * p.y;
        let (w, dw) = self.exponent(u);
        let e = (t * w).exp();
        let s = t * dw;
        let j = Jacobian2::new(e * (1.0 + u * s), e * s * p.x * p.x, -s * p.y * p.y / e, (1.0 - u * s) / e);
        (PlanePoint::new(p.x * e, p.y / e), j)
    }

    /// `T₀` as a descriptor with exact inverse.
    pub fn map(&self) -> MapDescriptor {
        let a = self.clone();
        let b = self.clone();
        MapDescriptor::new("T0", Domain::Plane, true, move |p| Ok(a.flow(p, 1.0))).with_inverse(move |q| Ok(b.flow(q, -1.0).0))
    }

    /// `T₀^k` by `k` single steps.
    pub fn iterate(&self, p: PlanePoint, k: usize) -> PlanePoint {
        (0..k).fold(p, |q, _| self.flow(q, 1.0).0)
    }

    /// Solve `T₀^k(x̄, ȳ) = (x, y)` for `(x, ȳ)` given `(x̄, y)`.
    ///
    /// Conservation of `u = xy` reduces this to `u = x̄ y e^{k w(u)}`,
    /// which is a strong contraction for large `k`.
    pub fn xi_eta(&self, k: usize, xbar: f64, y: f64) -> Result<XiEta, RescalingError> {
        let kf = k as f64;
        let base = xbar * y;
        let mut u = base * self.lambda.powi(k as i32);
        let mut converged = false;
        for _ in 0..FIXED_POINT_ITERS {
            let next = base * (kf * self.exponent(u).0).exp();
            if !next.is_finite() {
                break;
            }
            let d = (next - u).abs();
            u = next;
            if d <= 1e-17 * u.abs().max(1e-300) || d == 0.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(RescalingError::FixedPointDivergence { k, x: xbar, y });
        }
        let e = (kf * self.exponent(u).0).exp();
        let lk = self.lambda.powi(k as i32);
        let (x, ybar) = (xbar * e, y * e);
        Ok(XiEta { x, ybar, xi: x - lk * xbar, eta: ybar - lk * y })
    }

    /// `max |T₀^k(x̄, ȳ) − (x, y)|` by direct iteration, relative to the
    /// size of the exit point.
    pub fn xi_eta_residual(&self, k: usize, xbar: f64, y: f64) -> Result<f64, RescalingError> {
        let s = self.xi_eta(k, xbar, y)?;
        let q = self.iterate(PlanePoint::new(xbar, s.ybar), k);
        Ok(((q.x - s.x).abs() / s.x.abs().max(1e-300)).max((q.y - y).abs() / y.abs().max(1e-300)))
    }

    /// `sup |ξ_k|` and `sup |η_k|` over an `n × n` grid of a window.
    pub fn xi_eta_sup(&self, k: usize, window: [f64; 4], n: usize) -> Result<(f64, f64), RescalingError> {
        let [x0, x1, y0, y1] = window;
        let mut out = (0.0f64, 0.0f64);
        for a in 0..n {
            for b in 0..n {
                let t = |i: usize| if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
                let s = self.xi_eta(k, x0 + (x1 - x0) * t(a), y0 + (y1 - y0) * t(b))?;
                out = (out.0.max(s.xi.abs()), out.1.max(s.eta.abs()));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> SaddleNormalForm {
        SaddleNormalForm::new(0.4, vec![0.2, 0.1]).unwrap()
    }

    #[test]
    fn linear_saddle() {
        let t = SaddleNormalForm::linear(0.4).unwrap();
        let q = t.map().eval(PlanePoint::new(1.0, 2.0)).unwrap();
        assert!((q.x - 0.4).abs() < 1e-15 && (q.y - 5.0).abs() < 1e-14);
        let s = t.xi_eta(10, 0.3, 0.2).unwrap();
        assert!(s.xi.abs() < 1e-20 && s.eta.abs() < 1e-20);
    }

    #[test]
    fn invariant_and_pq() {
        let t = cubic();
        let mut p = PlanePoint::new(0.3, 0.01);
        let u0 = p.x * p.y;
        for _ in 0..100 {
            p = t.map().eval(p).unwrap();
            assert!((p.x * p.y - u0).abs() <= 1e-15);
        }
        for s in [-0.4, -0.1, 0.2, 0.5] {
            assert_eq!(t.pq(0.0, s).0, 0.0);
            assert_eq!(t.pq(s, 0.0).0, 0.0);
            assert_eq!(t.pq(s, 0.0).1, 0.0);
            assert_eq!(t.pq(0.0, s).1, 0.0);
        }
    }

    #[test]
    fn jacobian_and_inverse() {
        let t = cubic();
        let f = t.map();
        for (x, y) in [(0.3, 0.2), (-0.1, 0.4), (0.45, -0.35)] {
            let p = PlanePoint::new(x, y);
            let j = f.jacobian(p).unwrap();
            assert!((j.det() - 1.0).abs() < 1e-14);
            let fd = crate::symplectic::finite_difference_jacobian(&f, p, 1e-6).unwrap();
            assert!(j.max_abs_diff(&fd) < 1e-8);
            let back = f.exact_inverse(f.eval(p).unwrap()).unwrap().unwrap();
            assert!(back.dist(p) < 1e-15);
        }
    }

    #[test]
    fn xi_eta_reconstruction_and_decay() {
        let t = cubic();
        for k in [4, 8, 12] {
            assert!(t.xi_eta_residual(k, 0.02, 0.3).unwrap() < 1e-12);
        }
        let w = [0.005, 0.03, 0.28, 0.36];
        let mut prev = f64::INFINITY;
        for k in [6, 8, 10, 12, 14] {
            let (xi, _) = t.xi_eta_sup(k, w, 5).unwrap();
            let r = xi / 0.4f64.powi(k as i32);
            assert!(r < prev, "k = {k}: {r}");
            prev = r;
        }
    }
}
