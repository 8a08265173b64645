use crate::symplectic::{Jacobian2, MapError, PlanePoint};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Symplectic polar coordinates: `x = √(2ρ) cos θ`, `y = √(2ρ) sin θ`, so `dx∧dy = dρ∧dθ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub rho: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(rho: f64, theta: f64) -> Self {
        Self { rho, theta: theta.rem_euclid(TAU) }
    }
}

/// Polar coordinates of `p` about `center`.
pub fn polar_chart(p: PlanePoint, center: PlanePoint) -> Result<PolarPoint, MapError> {
    let d = p - center;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(MapError::Undefined { map: "polar_chart".into(), point: p, reason: "polar angle undefined at the center".into() });
    }
    Ok(PolarPoint::new(0.5 * d.dot(d), d.y.atan2(d.x)))
}

/// Inverse of [`polar_chart`].
pub fn polar_to_plane(q: PolarPoint, center: PlanePoint) -> PlanePoint {
    let r = (2.0 * q.rho).sqrt();
    center + PlanePoint::new(r * q.theta.cos(), r * q.theta.sin())
}

/// Derivative of `(ρ, θ) ↦ (u, v)`; determinant 1.
pub fn polar_to_plane_jacobian(rho: f64, theta: f64) -> Jacobian2 {
    let r = (2.0 * rho).sqrt();
    let (s, c) = theta.sin_cos();
    Jacobian2::new(c / r, -r * s, s / r, r * c)
}

/// Derivative of `(u, v) ↦ (ρ, θ)` at the displacement `d` from the center.
pub fn plane_to_polar_jacobian(d: PlanePoint) -> Jacobian2 {
    let r2 = d.dot(d);
    Jacobian2::new(d.x, d.y, -d.y / r2, d.x / r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_example() {
        let p = polar_to_plane(PolarPoint::new(0.5, 0.0), PlanePoint::ORIGIN);
        assert!(p.dist(PlanePoint::new(1.0, 0.0)) < 1e-15);
        assert!(polar_chart(PlanePoint::new(0.2, 0.3), PlanePoint::new(0.2, 0.3)).is_err());
    }

    #[test]
    fn jacobians_are_unimodular_and_inverse() {
        for (rho, th) in [(1e-6, 0.3), (0.01, 2.0), (0.7, 5.5)] {
            let j = polar_to_plane_jacobian(rho, th);
            assert!((j.det() - 1.0).abs() < 1e-12);
            let d = polar_to_plane(PolarPoint::new(rho, th), PlanePoint::ORIGIN);
            let k = plane_to_polar_jacobian(d);
            assert!((k * j).max_abs_diff(&Jacobian2::IDENTITY) < 1e-9);
        }
    }
}
