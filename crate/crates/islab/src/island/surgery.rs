use super::polar::{plane_to_polar_jacobian, polar_to_plane_jacobian};
use super::{SurgeryProfile, CENTERS};
use crate::symplectic::{wrap_centered, Domain, Jacobian2, MapDescriptor, MapError, PlanePoint};

fn displacement(p: PlanePoint, i: usize) -> PlanePoint {
    let c = CENTERS[i];
    PlanePoint::new(wrap_centered(p.x - c.x), wrap_centered(p.y - c.y))
}

/// Radial reparametrisation `ρ ↦ f(ρ)` about center `i`, with `f` and `f′`.
fn radial(i: usize, d: PlanePoint, rho2: f64, df: f64) -> (PlanePoint, Jacobian2) {
    let th = d.y.atan2(d.x);
    let r = (2.0 * rho2).sqrt();
    let d2 = PlanePoint::new(r * th.cos(), r * th.sin());
    let j = polar_to_plane_jacobian(rho2, th) * Jacobian2::diag(df, 1.0) * plane_to_polar_jacobian(d);
    (CENTERS[i] + d2, j)
}

/// The blow-up `Ψ_i`: `(ρ, θ) ↦ (ψ(ρ), θ)` about center `i`, identity off `V_i′`.
///
/// Defined on the torus minus the open disc `V_i`; it collapses `∂V_i` to the center.
pub fn surgery_map(i: usize, profile: SurgeryProfile) -> MapDescriptor {
    assert!(i < 4, "center index out of range");
    let name = format!("Psi_{i}");
    let n2 = name.clone();
    let fwd = move |p: PlanePoint| {
        let d = displacement(p, i);
        let rho = 0.5 * d.dot(d);
        if rho >= profile.half_eps2() {
            return Ok((p, Jacobian2::IDENTITY));
        }
        if rho < profile.half_delta2() {
            return Err(MapError::Undefined { map: n2.clone(), point: p, reason: "inside the removed disc".into() });
        }
        let (v, dv, _) = profile.psi(rho);
        if v == 0.0 {
            return Err(MapError::Undefined { map: n2.clone(), point: p, reason: "boundary circle collapses to the center".into() });
        }
        Ok(radial(i, d, v, dv))
    };
    let inv = surgery_inverse(i, profile);
    MapDescriptor::new(name, Domain::Torus, false, fwd).with_inverse(move |q| inv.eval(q))
}

/// Radial position of `Ψ_i(p)`; unlike [`surgery_map`] this is defined on `∂V_i`.
pub fn surgery_radius(i: usize, profile: &SurgeryProfile, p: PlanePoint) -> Option<f64> {
    let d = displacement(p.wrapped(), i);
    let rho = 0.5 * d.dot(d);
    if rho >= profile.half_eps2() {
        Some(rho)
    } else if rho < profile.half_delta2() {
        None
    } else {
        Some(profile.psi(rho).0)
    }
}

/// `Ψ_i⁻¹`, defined on the torus minus the center `Ω_i`.
pub fn surgery_inverse(i: usize, profile: SurgeryProfile) -> MapDescriptor {
    assert!(i < 4, "center index out of range");
    let name = format!("Psi_{i}^-1");
    let n2 = name.clone();
    MapDescriptor::new(name, Domain::Torus, false, move |q| {
        let d = displacement(q, i);
        let rho = 0.5 * d.dot(d);
        if rho >= profile.half_eps2() {
            return Ok((q, Jacobian2::IDENTITY));
        }
        if rho == 0.0 {
            return Err(MapError::Undefined { map: n2.clone(), point: q, reason: "the center has no preimage".into() });
        }
        let r2 = profile.psi_inverse(rho);
        Ok(radial(i, d, r2, 1.0 / profile.psi(r2).1))
    })
}
