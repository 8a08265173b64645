use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point of the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: PlanePoint) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Reduce both coordinates to `[0, 1)`.
    pub fn wrapped(self) -> PlanePoint {
        PlanePoint::new(wrap_unit(self.x), wrap_unit(self.y))
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for PlanePoint {
    fn add_assign(&mut self, o: PlanePoint) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

/// Reduce a real number to `[0, 1)`.
pub fn wrap_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Reduce a difference of torus coordinates to `[-1/2, 1/2)`.
pub fn wrap_centered(v: f64) -> f64 {
    let r = wrap_unit(v + 0.5) - 0.5;
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// A point of the torus R²/Z², stored with both coordinates in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x: wrap_unit(x), y: wrap_unit(y) }
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    /// Shortest displacement from `self` to `other` on the torus.
    pub fn displacement_to(self, other: TorusPoint) -> PlanePoint {
        PlanePoint::new(wrap_centered(other.x - self.x), wrap_centered(other.y - self.y))
    }

    pub fn dist(self, other: TorusPoint) -> f64 {
        self.displacement_to(other).norm()
    }
}

impl From<PlanePoint> for TorusPoint {
    fn from(p: PlanePoint) -> Self {
        TorusPoint::new(p.x, p.y)
    }
}

impl From<TorusPoint> for PlanePoint {
    fn from(p: TorusPoint) -> Self {
        PlanePoint::new(p.x, p.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_idempotent_and_in_range() {
        for v in [-3.25, -1.0, -1e-18, 0.0, 0.5, 0.999_999, 1.0, 7.75] {
            let w = wrap_unit(v);
            assert!((0.0..1.0).contains(&w), "{v} -> {w}");
            assert_eq!(wrap_unit(w), w);
        }
        let t = TorusPoint::new(1.25, -0.25);
        assert_eq!((t.x(), t.y()), (0.25, 0.75));
    }

    #[test]
    fn centered_wrap() {
        assert_eq!(wrap_centered(0.75), -0.25);
        assert_eq!(wrap_centered(-0.75), 0.25);
        assert_eq!(wrap_centered(0.5), -0.5);
        let a = TorusPoint::new(0.95, 0.05);
        let b = TorusPoint::new(0.05, 0.95);
        assert!((a.dist(b) - 0.02_f64.sqrt()).abs() < 1e-12);
    }
}
