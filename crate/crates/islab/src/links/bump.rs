use std::sync::Arc;

use crate::symplectic::scalar::{smooth_transition, Scalar, ScalarFn};

use super::periodic::PeriodicFn;

/// A partition bump `ρ` supported in `[s0+δ, s0+2τ−δ]` with
/// `ρ(x) + ρ(x+τ) = 1` on `[s0, s0+τ]`.
///
/// Built as `R(x)` rising on `[s0+δ, s0+τ−δ]` and `1 − R(x−τ)` falling
/// on `[s0+τ+δ, s0+2τ−δ]`, so the partition identity holds exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionBump {
    pub start: f64,
    pub period: f64,
    pub margin: f64,
}

impl PartitionBump {
    pub fn new(start: f64, period: f64, margin: f64) -> Self {
        assert!(margin > 0.0 && 2.0 * margin < period);
        Self { start, period, margin }
    }

    fn rise(&self, x: f64) -> (f64, f64, f64) {
        let w = self.period - 2.0 * self.margin;
        let (r, r1, r2) = smooth_transition((x - self.start - self.margin) / w);
        (r, r1 / w, r2 / (w * w))
    }

    /// Value and two derivatives.
    pub fn eval3(&self, x: f64) -> (f64, f64, f64) {
        if x < self.start + self.period {
            self.rise(x)
        } else {
            let (r, r1, r2) = self.rise(x - self.period);
            (1.0 - r, -r1, -r2)
        }
    }

    /// Closed support interval.
    pub fn support(&self) -> (f64, f64) {
        (self.start + self.margin, self.start + 2.0 * self.period - self.margin)
    }
}

impl ScalarFn for PartitionBump {
    fn value(&self, x: f64) -> f64 {
        self.eval3(x).0
    }
    fn deriv(&self, x: f64) -> f64 {
        self.eval3(x).1
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.eval3(x).2
    }
}

/// `ρ·ψ̃` for a partition bump `ρ` and a periodic `ψ̃`.
#[derive(Clone, Debug)]
pub struct Bumped {
    pub bump: PartitionBump,
    pub base: PeriodicFn,
}

impl Bumped {
    pub fn new(bump: PartitionBump, base: PeriodicFn) -> Self {
        Self { bump, base }
    }

    pub fn into_scalar(self) -> Scalar {
        Arc::new(self)
    }
}

impl ScalarFn for Bumped {
    fn value(&self, x: f64) -> f64 {
        let r = self.bump.value(x);
        if r == 0.0 {
            0.0
        } else {
            r * self.base.eval(x)
        }
    }
    fn deriv(&self, x: f64) -> f64 {
        let (r, r1, _) = self.bump.eval3(x);
        if r == 0.0 && r1 == 0.0 {
            return 0.0;
        }
        r1 * self.base.eval(x) + r * self.base.derivative(x, 1)
    }
    fn deriv2(&self, x: f64) -> f64 {
        let (r, r1, r2) = self.bump.eval3(x);
        if r == 0.0 && r1 == 0.0 && r2 == 0.0 {
            return 0.0;
        }
        r2 * self.base.eval(x) + 2.0 * r1 * self.base.derivative(x, 1) + r * self.base.derivative(x, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_identity_is_exact() {
        let b = PartitionBump::new(2.0, 1.0, 0.1);
        for k in 0..=200 {
            let x = 2.0 + k as f64 / 200.0;
            let s = b.value(x) + b.value(x + 1.0);
            assert!((s - 1.0).abs() < 1e-15, "{x}: {s}");
        }
        assert_eq!(b.value(2.09), 0.0);
        assert_eq!(b.value(3.91), 0.0);
        assert_eq!(b.value(3.0), 1.0);
        assert_eq!(b.support(), (2.1, 3.9));
    }

    #[test]
    fn bumped_derivative_matches_difference() {
        let b = PartitionBump::new(-5.0, 1.0, 0.1);
        let f = Bumped::new(b, PeriodicFn::trig_polynomial(-4.0, 1.0, 32, 0.0, &[0.01], &[0.0, 0.02]));
        let h = 1e-6;
        for x in [-4.8, -4.5, -4.0, -3.7, -3.2] {
            let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
            assert!((fd - f.deriv(x)).abs() < 1e-8);
            let fd2 = (f.deriv(x + h) - f.deriv(x - h)) / (2.0 * h);
            assert!((fd2 - f.deriv2(x)).abs() < 1e-6);
        }
    }
}
