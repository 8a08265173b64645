//! Named maps.

use super::scalar::Scalar;
use super::{Domain, Jacobian2, MapDescriptor, PlanePoint};
use std::f64::consts::PI;

/// The hyperbolic matrix of the cat map used throughout.
pub const ANOSOV_MATRIX: Jacobian2 = Jacobian2::new(13.0, 8.0, 8.0, 5.0);

/// `ln(9 + 4√5)`, the log of the expanding eigenvalue of [`ANOSOV_MATRIX`].
pub fn anosov_exponent() -> f64 {
    (9.0 + 4.0 * 5f64.sqrt()).ln()
}

/// Toral automorphism `(x, y) ↦ (13x + 8y, 8x + 5y) mod 1`.
pub fn anosov_map() -> MapDescriptor {
    let a = ANOSOV_MATRIX;
    let ai = a.inverse().expect("unimodular");
    MapDescriptor::new("F_A", Domain::Torus, true, move |p| Ok((a.apply(p), a)))
        .with_inverse(move |q| Ok(ai.apply(q)))
}

/// Chirikov standard map `T_a(x, y) = (2x − y + a sin 2πx, x) mod 1`.
pub fn chirikov_map(a: f64) -> MapDescriptor {
    MapDescriptor::new(format!("T_{a}"), Domain::Torus, true, move |p| {
        let s = (2.0 * PI * p.x).sin();
        let c = (2.0 * PI * p.x).cos();
        Ok((PlanePoint::new(2.0 * p.x - p.y + a * s, p.x), Jacobian2::new(2.0 + 2.0 * PI * a * c, -1.0, 1.0, 0.0)))
    })
    .with_inverse(move |q| {
        let x = q.y;
        Ok(PlanePoint::new(x, 2.0 * x - q.x + a * (2.0 * PI * x).sin()))
    })
}

/// Vertical shear `S_ψ(x, y) = (x, y + ψ(x))`.
pub fn shear_map(psi: Scalar) -> MapDescriptor {
    let p2 = psi.clone();
    MapDescriptor::new("S_psi", Domain::Plane, true, move |p| {
        Ok((PlanePoint::new(p.x, p.y + psi.value(p.x)), Jacobian2::new(1.0, 0.0, psi.deriv(p.x), 1.0)))
    })
    .with_inverse(move |q| Ok(PlanePoint::new(q.x, q.y - p2.value(q.x))))
}

/// Hénon-like map `H_ψ(x, y) = (y, −x + ψ(y))`.
pub fn henon_like(psi: Scalar) -> MapDescriptor {
    let p2 = psi.clone();
    MapDescriptor::new("H_psi", Domain::Plane, true, move |p| {
        Ok((PlanePoint::new(p.y, -p.x + psi.value(p.y)), Jacobian2::new(0.0, 1.0, -1.0, psi.deriv(p.y))))
    })
    .with_inverse(move |q| Ok(PlanePoint::new(p2.value(q.x) - q.y, q.x)))
}

/// `H_0(x, y) = (y, −x)`.
pub fn henon_zero() -> MapDescriptor {
    linear_map("H_0", Jacobian2::new(0.0, 1.0, -1.0, 0.0))
}

/// The rotation `R(x, y) = (−y, x)`, equal to `H_0⁻¹`.
pub fn quarter_rotation() -> MapDescriptor {
    linear_map("R", Jacobian2::new(0.0, -1.0, 1.0, 0.0))
}

/// Planar linear map with an invertible matrix.
pub fn linear_map(name: &str, a: Jacobian2) -> MapDescriptor {
    let ai = a.inverse().expect("linear map must be invertible");
    let symp = (a.det() - 1.0).abs() <= 1e-14;
    MapDescriptor::new(name, Domain::Plane, symp, move |p| Ok((a.apply(p), a))).with_inverse(move |q| Ok(ai.apply(q)))
}

/// Affine map `p ↦ A p + c`.
pub fn affine_map(name: &str, a: Jacobian2, c: PlanePoint) -> MapDescriptor {
    let ai = a.inverse().expect("affine map must be invertible");
    let symp = (a.det() - 1.0).abs() <= 1e-14;
    MapDescriptor::new(name, Domain::Plane, symp, move |p| Ok((a.apply(p) + c, a))).with_inverse(move |q| Ok(ai.apply(q - c)))
}

pub fn translation(c: PlanePoint) -> MapDescriptor {
    affine_map("translation", Jacobian2::IDENTITY, c)
}

pub fn identity_map() -> MapDescriptor {
    linear_map("id", Jacobian2::IDENTITY)
}

/// Identity on the torus.
pub fn torus_identity() -> MapDescriptor {
    MapDescriptor::new("id_T2", Domain::Torus, true, |p| Ok((p, Jacobian2::IDENTITY))).with_inverse(Ok)
}

/// Rotation of the plane by `angle`.
pub fn rotation(angle: f64) -> MapDescriptor {
    let (s, c) = angle.sin_cos();
    linear_map("rotation", Jacobian2::new(c, -s, s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::scalar::{Polynomial, Zero};
    use crate::symplectic::{compose, invert_at};
    use std::sync::Arc;

    #[test]
    fn anosov_fixed_points() {
        let f = anosov_map();
        for p in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)] {
            let p = PlanePoint::new(p.0, p.1);
            assert_eq!(f.eval(p).unwrap(), p);
        }
        assert!((anosov_exponent() - 2.887271).abs() < 1e-6);
    }

    #[test]
    fn chirikov_elliptic_point() {
        for a in [0.1, 0.5, 1.3] {
            let t = chirikov_map(a);
            let (q, j) = t.step(PlanePoint::new(0.5, 0.5)).unwrap();
            assert!(q.dist(PlanePoint::new(0.5, 0.5)) < 1e-15);
            assert!((j.trace() - (2.0 - 2.0 * PI * a)).abs() < 1e-14);
            let elliptic = a > 0.0 && a < 2.0 / PI;
            assert_eq!(j.eigenvalues().on_unit_circle(1e-12), elliptic, "a = {a}");
        }
    }

    #[test]
    fn henon_and_shear_identities() {
        let sq: Scalar = Arc::new(Polynomial::new(vec![0.0, 0.0, 1.0]));
        let h = henon_like(sq.clone());
        assert_eq!(h.eval(PlanePoint::new(1.0, 2.0)).unwrap(), PlanePoint::new(2.0, 3.0));
        let p = invert_at(&h, PlanePoint::new(2.0, 3.0), PlanePoint::new(1.1, 1.9)).unwrap();
        assert_eq!(p, PlanePoint::new(1.0, 2.0));
        assert_eq!(henon_zero().eval(PlanePoint::new(1.0, 0.0)).unwrap(), PlanePoint::new(0.0, -1.0));
        let hh = compose(&henon_zero(), &henon_zero());
        assert_eq!(hh.eval(PlanePoint::new(0.3, -0.7)).unwrap(), PlanePoint::new(-0.3, 0.7));
        // S_ψ = H_ψ ∘ H_0⁻¹ with H_0⁻¹ = R.
        let s = shear_map(sq.clone());
        let hr = compose(&h, &quarter_rotation());
        for (x, y) in [(0.3, 0.4), (-1.2, 2.0), (0.0, -0.5)] {
            let p = PlanePoint::new(x, y);
            assert!(s.eval(p).unwrap().dist(hr.eval(p).unwrap()) < 1e-15);
        }
        let s0 = shear_map(Arc::new(Zero));
        assert_eq!(s0.eval(PlanePoint::new(0.2, 0.9)).unwrap(), PlanePoint::new(0.2, 0.9));
    }
}
