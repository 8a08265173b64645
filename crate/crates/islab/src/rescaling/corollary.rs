use std::sync::Arc;

use crate::symplectic::maps::{henon_like, henon_zero, shear_map};
use crate::symplectic::scalar::Polynomial;
use crate::symplectic::{chain, MapDescriptor, MapError, PlanePoint};

use super::RescalingError;

/// The maps of the shear corollary for a prefix `ψ_1..ψ_{N′}` and a
/// final `ψ`, all `Φ_i = id`.
#[derive(Clone, Debug)]
pub struct CorollaryPair {
    /// `F̂ = H₀³∘H_{ψ_{N′}}∘…∘H_{ψ_1}`.
    pub f_hat: MapDescriptor,
    /// `S_ψ∘F̂`.
    pub shear_f_hat: MapDescriptor,
    /// The product for `ψ_1..ψ_{N′}, 0, 0, ψ`: `H_ψ∘H₀∘H₀∘H_{ψ_{N′}}∘…∘H_{ψ_1}`.
    pub product: MapDescriptor,
}

impl CorollaryPair {
    /// `sup |S_ψ∘F̂ − product|` over `points`.
    pub fn defect(&self, points: &[PlanePoint]) -> Result<f64, MapError> {
        points.iter().try_fold(0.0f64, |m, &p| Ok(m.max(self.shear_f_hat.eval(p)?.dist(self.product.eval(p)?))))
    }
}

/// Build the pair. Since `S_ψ = H_ψ∘H₀⁻¹`, the odd-length product with
/// two zero functions inserted equals `S_ψ∘F̂` exactly when `F̂` carries
/// three factors `H₀`.
pub fn corollary_composition(prefix: &[Polynomial], psi: &Polynomial) -> Result<CorollaryPair, RescalingError> {
    if prefix.len() % 2 == 1 {
        return Err(RescalingError::OddPrefix(prefix.len()));
    }
    let mut head: Vec<MapDescriptor> = prefix.iter().map(|p| henon_like(Arc::new(p.clone()))).collect();
    head.push(henon_zero());
    head.push(henon_zero());
    let mut f = head.clone();
    f.push(henon_zero());
    let f_hat = chain(&f).renamed("F_hat");
    let shear_f_hat = chain(&[f_hat.clone(), shear_map(Arc::new(psi.clone()))]);
    let mut prod = head;
    prod.push(henon_like(Arc::new(psi.clone())));
    Ok(CorollaryPair { f_hat, shear_f_hat, product: chain(&prod) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rescaling::verify::disc_grid;

    #[test]
    fn identity_holds() {
        let prefix = vec![Polynomial::new(vec![0.1, -0.2, 0.3]), Polynomial::new(vec![-0.05, 0.0, 0.2])];
        let psi = Polynomial::new(vec![0.0, 0.1, -0.1, 0.2]);
        let pair = corollary_composition(&prefix, &psi).unwrap();
        assert!(pair.defect(&disc_grid(1000)).unwrap() <= 1e-12);
        assert!(matches!(corollary_composition(&prefix[..1], &psi), Err(RescalingError::OddPrefix(1))));
    }

    #[test]
    fn empty_prefix_with_zero_psi() {
        let pair = corollary_composition(&[], &Polynomial::new(vec![0.0])).unwrap();
        let p = PlanePoint::new(0.3, -0.4);
        assert_eq!(pair.shear_f_hat.eval(p).unwrap(), pair.product.eval(p).unwrap());
        // H₀³ = H₀⁻¹ = R.
        assert_eq!(pair.f_hat.eval(p).unwrap(), PlanePoint::new(0.4, 0.3));
    }
}
