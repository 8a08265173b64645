use serde::{Deserialize, Serialize};

use crate::symplectic::{Domain, Jacobian2, MapDescriptor, MapError, PlanePoint};

use super::RescalingError;

/// Linear data of one transition: `M⁻ = (0, y⁻) ↦ M⁺ = (x⁺, 0)` with
/// `DT₁(M⁻) = [[0, b], [c, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionConstants {
    pub x_plus: f64,
    pub y_minus: f64,
    pub b: f64,
    pub c: f64,
}

/// Coefficients of the nonlinear factor `W_g∘U_β` (see [`TransitionMap`]).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransitionTails {
    pub beta2: f64,
    pub beta3: f64,
    pub g2: f64,
    pub g3: f64,
}

/// Largest tail coefficient accepted.
const MAX_TAIL: f64 = 0.2;
/// Half-width of the `v = y − y⁻` window on which `g` must be monotone.
const V_WINDOW: f64 = 0.5;

impl TransitionTails {
    pub fn is_zero(&self) -> bool {
        *self == Self::default()
    }

    fn beta(&self, x: f64) -> (f64, f64) {
        (x * x * (self.beta2 + self.beta3 * x), x * (2.0 * self.beta2 + 3.0 * self.beta3 * x))
    }

    /// `g(v) = v + g₂v² + g₃v³` and two derivatives.
    fn g(&self, v: f64) -> (f64, f64, f64) {
        (
            v + v * v * (self.g2 + self.g3 * v),
            1.0 + v * (2.0 * self.g2 + 3.0 * self.g3 * v),
            2.0 * self.g2 + 6.0 * self.g3 * v,
        )
    }
}

/// `T₁ = A∘W_g∘U_β` near `M⁻` in the variables `(x, v = y − y⁻)`:
///
/// * `U_β(x, v) = (x, v + β(x))`, `β(x) = β₂x² + β₃x³`,
/// * `W_g(x, v) = (x / g′(v), g(v))`,
/// * `A(s, w) = (x⁺ + b w, c s)`.
///
/// Each factor is area-preserving (`bc = −1`), so `T₁` is exactly
/// symplectic, and the tails `φ₁ = b(g(v+β) − v)`, `φ₂ = c x (1/g′(v+β) − 1)`
/// vanish with the required derivatives at the origin by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionMap {
    pub consts: TransitionConstants,
    pub tails: TransitionTails,
}

/// Check `b c = −1` and the tail bounds, and build the map.
pub fn build_transition(
    index: usize,
    consts: TransitionConstants,
    tails: TransitionTails,
) -> Result<TransitionMap, RescalingError> {
    let prod = consts.b * consts.c;
    if !((prod + 1.0).abs() <= 1e-12) {
        return Err(RescalingError::BcViolation { index, product: prod });
    }
    let t = [tails.beta2, tails.beta3, tails.g2, tails.g3];
    if t.iter().any(|c| !(c.abs() <= MAX_TAIL)) {
        return Err(RescalingError::Parameter(format!("tail coefficients of T1 #{index} must be at most {MAX_TAIL} in size")));
    }
    // g′ > 0 on the window, so W_g is a diffeomorphism there.
    let worst = 1.0 - 2.0 * tails.g2.abs() * V_WINDOW - 3.0 * tails.g3.abs() * V_WINDOW * V_WINDOW;
    if worst <= 0.25 {
        return Err(RescalingError::Parameter(format!("tail of T1 #{index} is not monotone on |v| ≤ {V_WINDOW}")));
    }
    Ok(TransitionMap { consts, tails })
}

impl TransitionMap {
    /// `d = ∂_x∂_y φ₂(0, 0)`.
    pub fn d(&self) -> f64 {
        -2.0 * self.consts.c * self.tails.g2
    }

    pub fn step(&self, p: PlanePoint) -> (PlanePoint, Jacobian2) {
        let TransitionConstants { x_plus, y_minus, b, c } = self.consts;
        let (beta, dbeta) = self.tails.beta(p.x);
        let v = p.y - y_minus + beta;
        let (g, g1, g2) = self.tails.g(v);
        let q = PlanePoint::new(x_plus + b * g, c * p.x / g1);
        let j = Jacobian2::new(
            b * g1 * dbeta,
            b * g1,
            c / g1 - c * p.x * g2 * dbeta / (g1 * g1),
            -c * p.x * g2 / (g1 * g1),
        );
        (q, j)
    }

    pub fn inverse(&self, q: PlanePoint) -> Result<PlanePoint, MapError> {
        let TransitionConstants { x_plus, y_minus, b, c } = self.consts;
        let w = (q.x - x_plus) / b;
        let mut v = w;
        for _ in 0..60 {
            let (g, g1, _) = self.tails.g(v);
            let dv = (g - w) / g1;
            v -= dv;
            if dv.abs() <= 1e-17 * (1.0 + v.abs()) {
                let x = q.y * self.tails.g(v).1 / c;
                return Ok(PlanePoint::new(x, y_minus + v - self.tails.beta(x).0));
            }
        }
        Err(MapError::NonConvergence { what: "transition inverse".into(), iterations: 60, residual: (self.tails.g(v).0 - w).abs() })
    }

    pub fn map(&self) -> MapDescriptor {
        let (a, b) = (*self, *self);
        MapDescriptor::new("T1", Domain::Plane, true, move |p| Ok(a.step(p))).with_inverse(move |q| b.inverse(q))
    }

    /// The tails `(φ₁, φ₂)` at `(x, v)`.
    pub fn tails_at(&self, x: f64, v: f64) -> (f64, f64) {
        let TransitionConstants { x_plus, y_minus, b, c } = self.consts;
        let (q, _) = self.step(PlanePoint::new(x, y_minus + v));
        (q.x - x_plus - b * v, q.y - c * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TransitionMap {
        let consts = TransitionConstants { x_plus: 0.02, y_minus: 0.3, b: -0.01, c: 100.0 };
        build_transition(1, consts, TransitionTails { beta2: 0.2, beta3: -0.1, g2: 0.1, g3: 0.05 }).unwrap()
    }

    #[test]
    fn base_point_and_determinant() {
        let t = sample();
        let (q, j) = t.step(PlanePoint::new(0.0, 0.3));
        assert_eq!(q, PlanePoint::new(0.02, 0.0));
        assert!((j.det() - 1.0).abs() < 1e-12);
        for (x, y) in [(1e-3, 0.31), (-2e-3, 0.25), (0.01, 0.4)] {
            let p = PlanePoint::new(x, y);
            let f = t.map();
            let j = f.jacobian(p).unwrap();
            assert!((j.det() - 1.0).abs() < 1e-10);
            let fd = crate::symplectic::finite_difference_jacobian(&f, p, 1e-7).unwrap();
            assert!(j.max_abs_diff(&fd) < 1e-5 * j.max_abs());
            assert!(t.inverse(f.eval(p).unwrap()).unwrap().dist(p) < 1e-14);
        }
    }

    #[test]
    fn tails_vanish_to_the_stated_order() {
        let t = sample();
        let h = 1e-5;
        let (p1, p2) = t.tails_at(0.0, 0.0);
        assert_eq!((p1, p2), (0.0, 0.0));
        let dv1 = (t.tails_at(0.0, h).0 - t.tails_at(0.0, -h).0) / (2.0 * h);
        let dx2 = (t.tails_at(h, 0.0).1 - t.tails_at(-h, 0.0).1) / (2.0 * h);
        let dv2 = (t.tails_at(0.0, h).1 - t.tails_at(0.0, -h).1) / (2.0 * h);
        assert!(dv1.abs() < 1e-9 && dx2.abs() < 1e-9 && dv2.abs() < 1e-9);
        let dxy = (t.tails_at(h, h).1 - t.tails_at(h, -h).1 - t.tails_at(-h, h).1 + t.tails_at(-h, -h).1) / (4.0 * h * h);
        assert!((dxy - t.d()).abs() < 1e-4 * t.d().abs());
        // φ₂ / x stays bounded as x → 0.
        for x in [1e-3, 1e-6, 1e-9] {
            assert!((t.tails_at(x, 0.1).1 / x).abs() < 10.0);
        }
    }

    #[test]
    fn zero_tails_are_affine_and_bc_is_checked() {
        let c = TransitionConstants { x_plus: 0.02, y_minus: 0.3, b: -0.01, c: 100.0 };
        let t = build_transition(0, c, TransitionTails::default()).unwrap();
        let q = t.map().eval(PlanePoint::new(1e-3, 0.35)).unwrap();
        assert!((q.x - (0.02 - 0.01 * 0.05)).abs() < 1e-17 && (q.y - 0.1).abs() < 1e-15);
        let bad = TransitionConstants { c: 90.0, ..c };
        assert!(matches!(build_transition(2, bad, TransitionTails::default()), Err(RescalingError::BcViolation { .. })));
    }
}
