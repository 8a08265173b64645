use super::IslandError;
use crate::symplectic::scalar::smoothstep5;
use serde::{Deserialize, Serialize};

/// Radii and cutoffs of the blow-up surgery.
///
/// `δ` is the radius of the removed disc `V_i`, `ε` that of the collar
/// `V_i′`. In action units the collar is `δ²/2 ≤ ρ ≤ ε²/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryProfile {
    pub delta: f64,
    pub epsilon: f64,
    /// Below this action the flow Hamiltonian vanishes identically.
    pub rho0: f64,
    /// Above this action the flow cutoff is identically 1.
    pub rho1: f64,
}

impl Default for SurgeryProfile {
    fn default() -> Self {
        Self::new(0.15, 0.24).expect("default profile is valid")
    }
}

impl SurgeryProfile {
    /// Profile with `ρ₀ = δ²/4` and `ρ₁ = 3δ²/8`.
    pub fn new(delta: f64, epsilon: f64) -> Result<Self, IslandError> {
        let p = Self { delta, epsilon, rho0: delta * delta / 4.0, rho1: 3.0 * delta * delta / 8.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_rho0(mut self, rho0: f64) -> Result<Self, IslandError> {
        self.rho0 = rho0;
        self.rho1 = 0.5 * (rho0 + self.half_delta2());
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), IslandError> {
        let bad = |m: &str| Err(IslandError::InvalidProfile(m.to_string()));
        if !(self.delta > 0.0) || !self.delta.is_finite() || !self.epsilon.is_finite() {
            return bad("radii must be positive and finite");
        }
        if self.delta >= self.epsilon {
            return bad("inner radius must be < outer");
        }
        if 2.0 * self.epsilon >= 0.5 {
            return bad("outer radius must be < 1/4 so the four collars are disjoint");
        }
        if !(self.rho0 > 0.0 && self.rho0 < self.rho1 && self.rho1 < self.half_delta2()) {
            return bad("need 0 < rho0 < rho1 < delta^2/2");
        }
        Ok(())
    }

    pub fn half_delta2(&self) -> f64 {
        0.5 * self.delta * self.delta
    }

    pub fn half_eps2(&self) -> f64 {
        0.5 * self.epsilon * self.epsilon
    }

    /// Interval on which the radial cutoff leaves the exact shift `ρ − δ²/2`.
    fn psi_knots(&self) -> (f64, f64) {
        let (d, e) = (self.half_delta2(), self.half_eps2());
        (d + 0.25 * (e - d), d + 0.75 * (e - d))
    }

    /// Radial cutoff ψ with first and second derivatives, defined for ρ ≥ δ²/2.
    pub fn psi(&self, rho: f64) -> (f64, f64, f64) {
        let (a, b) = self.psi_knots();
        let w = b - a;
        let (s, s1, s2) = smoothstep5((rho - a) / w);
        let d = self.half_delta2();
        (rho - d * (1.0 - s), 1.0 + d * s1 / w, d * s2 / (w * w))
    }

    /// Inverse of ψ on `[0, ε²/2]`.
    pub fn psi_inverse(&self, y: f64) -> f64 {
        let (a, b) = self.psi_knots();
        let d = self.half_delta2();
        if y <= a - d {
            return y + d;
        }
        if y >= b {
            return y;
        }
        // ψ is increasing on [a, b]; Newton with a bisection safeguard.
        let (mut lo, mut hi) = (a, b);
        let mut r = (y + d).clamp(a, b);
        for _ in 0..100 {
            let (v, dv, _) = self.psi(r);
            let f = v - y;
            if f == 0.0 {
                return r;
            }
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let mut next = r - f / dv;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - r).abs() <= 1e-17 * (1.0 + r.abs()) || hi - lo <= 1e-17 {
                return next;
            }
            r = next;
        }
        r
    }

    /// Flow cutoff ξ with two derivatives: 0 on `[0, ρ₀]`, 1 on `[ρ₁, ∞)`.
    pub fn xi(&self, rho: f64) -> (f64, f64, f64) {
        let w = self.rho1 - self.rho0;
        let (s, s1, s2) = smoothstep5((rho - self.rho0) / w);
        (s, s1 / w, s2 / (w * w))
    }

    /// Area of the four removed discs, `4πδ²`.
    pub fn removed_area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.delta * self.delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_shape() {
        let p = SurgeryProfile::default();
        let d = p.half_delta2();
        assert_eq!(p.psi(d).0, 0.0);
        assert_eq!(p.psi(d * 1.01).0, d * 1.01 - d);
        let e = p.half_eps2();
        assert_eq!(p.psi(e).0, e);
        let mut prev = -1.0;
        for i in 0..=1000 {
            let r = d + (e - d) * i as f64 / 1000.0;
            let (v, dv, _) = p.psi(r);
            assert!(v > prev && dv > 0.0);
            prev = v;
            assert!((p.psi_inverse(v) - r).abs() < 1e-15, "r = {r}");
        }
    }

    #[test]
    fn xi_shape() {
        let p = SurgeryProfile::default();
        assert_eq!(p.xi(p.rho0 * 0.5).0, 0.0);
        assert_eq!(p.xi(p.half_delta2()).0, 1.0);
        assert_eq!(p.xi(p.rho1).0, 1.0);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(SurgeryProfile::new(0.2, 0.15).is_err());
        assert!(SurgeryProfile::new(0.15, 0.30).is_err());
        let e = SurgeryProfile::new(0.3, 0.2).unwrap_err().to_string();
        assert!(e.contains("inner radius must be < outer"), "{e}");
    }
}
