use super::PlanePoint;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// A real 2×2 matrix, used for derivatives of planar maps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jacobian2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

/// Eigenvalues of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eigenvalues {
    /// Real pair, ordered by decreasing absolute value.
    Real(f64, f64),
    /// Complex conjugate pair `re ± i·im` with `im > 0`.
    Complex { re: f64, im: f64 },
}

impl Eigenvalues {
    /// Largest modulus.
    pub fn spectral_radius(self) -> f64 {
        match self {
            Eigenvalues::Real(a, _) => a.abs(),
            Eigenvalues::Complex { re, im } => re.hypot(im),
        }
    }

    pub fn on_unit_circle(self, tol: f64) -> bool {
        match self {
            Eigenvalues::Real(a, b) => (a.abs() - 1.0).abs() <= tol && (b.abs() - 1.0).abs() <= tol,
            Eigenvalues::Complex { re, im } => (re.hypot(im) - 1.0).abs() <= tol,
        }
    }
}

impl Jacobian2 {
    pub const IDENTITY: Jacobian2 = Jacobian2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::new(a, 0.0, 0.0, b)
    }

    /// Matrix with the given columns.
    pub fn from_columns(c1: PlanePoint, c2: PlanePoint) -> Self {
        Self::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn apply(&self, v: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn add(&self, o: &Jacobian2) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }

    pub fn sub(&self, o: &Jacobian2) -> Self {
        self.add(&o.scale(-1.0))
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.a11.abs().max(self.a12.abs()).max(self.a21.abs()).max(self.a22.abs())
    }

    pub fn max_abs_diff(&self, o: &Jacobian2) -> f64 {
        self.sub(o).max_abs()
    }

    /// Operator 2-norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        let f2 = self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22;
        let d = self.det();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        ((f2 + disc) / 2.0).sqrt()
    }

    pub fn eigenvalues(&self) -> Eigenvalues {
        let t = self.trace();
        let d = self.det();
        let disc = t * t / 4.0 - d;
        if disc >= 0.0 {
            let s = disc.sqrt();
            // Stable formula: compute the larger root first.
            let big = if t >= 0.0 { t / 2.0 + s } else { t / 2.0 - s };
            let small = if big != 0.0 { d / big } else { t / 2.0 - s };
            Eigenvalues::Real(big, small)
        } else {
            Eigenvalues::Complex { re: t / 2.0, im: (-disc).sqrt() }
        }
    }

    /// Unit eigenvector for a real eigenvalue `ev`.
    pub fn eigenvector(&self, ev: f64) -> PlanePoint {
        // Rows of (M - ev I) are orthogonal to the eigenvector; take the larger row.
        let r1 = PlanePoint::new(self.a11 - ev, self.a12);
        let r2 = PlanePoint::new(self.a21, self.a22 - ev);
        let r = if r1.norm() >= r2.norm() { r1 } else { r2 };
        let v = if r.norm() == 0.0 { PlanePoint::new(1.0, 0.0) } else { PlanePoint::new(-r.y, r.x) };
        v * (1.0 / v.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }
}

impl Mul for Jacobian2 {
    type Output = Jacobian2;
    fn mul(self, o: Jacobian2) -> Jacobian2 {
        Jacobian2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anosov_spectrum() {
        let a = Jacobian2::new(13.0, 8.0, 8.0, 5.0);
        assert_eq!(a.det(), 1.0);
        match a.eigenvalues() {
            Eigenvalues::Real(l, s) => {
                assert!((l - (9.0 + 4.0 * 5f64.sqrt())).abs() < 1e-12);
                assert!((l * s - 1.0).abs() < 1e-14);
                let v = a.eigenvector(l);
                assert!((a.apply(v) - v * l).norm() < 1e-11);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rotation_is_elliptic() {
        let r = Jacobian2::new(0.0, -1.0, 1.0, 0.0);
        assert_eq!(r.eigenvalues(), Eigenvalues::Complex { re: 0.0, im: 1.0 });
        assert!(r.eigenvalues().on_unit_circle(1e-15));
        assert!((r.norm2() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_and_product() {
        let m = Jacobian2::new(2.0, 1.0, 3.0, 4.0);
        let i = m.inverse().unwrap();
        assert!((m * i).max_abs_diff(&Jacobian2::IDENTITY) < 1e-15);
        assert!(Jacobian2::new(1.0, 2.0, 2.0, 4.0).inverse().is_none());
    }
}
