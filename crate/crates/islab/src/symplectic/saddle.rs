use super::{Eigenvalues, Jacobian2, PlanePoint};
use serde::{Deserialize, Serialize};

/// A hyperbolic fixed point with its eigen-data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleData {
    pub point: PlanePoint,
    pub unstable_eigenvalue: f64,
    pub stable_eigenvalue: f64,
    pub unstable_direction: PlanePoint,
    pub stable_direction: PlanePoint,
}

impl SaddleData {
    /// Eigen-data of `jacobian`; `None` unless the eigenvalues are real with `|λ_u| > 1 > |λ_s|`.
    pub fn from_jacobian(point: PlanePoint, jacobian: Jacobian2) -> Option<Self> {
        match jacobian.eigenvalues() {
            Eigenvalues::Real(lu, ls) if lu.abs() > 1.0 && ls.abs() < 1.0 => Some(Self {
                point,
                unstable_eigenvalue: lu,
                stable_eigenvalue: ls,
                unstable_direction: jacobian.eigenvector(lu),
                stable_direction: jacobian.eigenvector(ls),
            }),
            _ => None,
        }
    }

    /// `λ_u · λ_s`, equal to 1 for area-preserving maps.
    pub fn multiplier_product(&self) -> f64 {
        self.unstable_eigenvalue * self.stable_eigenvalue
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_saddle() {
        let s = SaddleData::from_jacobian(PlanePoint::ORIGIN, Jacobian2::diag(0.5, 2.0)).unwrap();
        assert_eq!(s.unstable_eigenvalue, 2.0);
        assert_eq!(s.stable_eigenvalue, 0.5);
        assert!(s.unstable_direction.x.abs() < 1e-15 && (s.unstable_direction.y.abs() - 1.0).abs() < 1e-15);
        assert!(SaddleData::from_jacobian(PlanePoint::ORIGIN, Jacobian2::new(0.0, -1.0, 1.0, 0.0)).is_none());
    }
}
