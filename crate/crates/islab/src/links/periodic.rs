use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::symplectic::scalar::ScalarFn;

/// Default number of samples per period.
pub const PERIODIC_SAMPLES: usize = 128;

/// A τ-periodic function stored as uniform samples over `[x0, x0+τ)` and
/// evaluated by trigonometric interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicFn {
    x0: f64,
    period: f64,
    samples: Vec<f64>,
    // Real Fourier coefficients: a[k] cos + b[k] sin of 2πk(x−x0)/τ, k = 0..=n/2.
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Serialized form: period and samples (the origin is implied by the owner).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampledFunction {
    pub period: f64,
    pub samples: Vec<f64>,
}

impl PeriodicFn {
    /// Build from samples at `x0 + kτ/n`, `k = 0..n`. `n` must be even and ≥ 4.
    pub fn from_samples(x0: f64, period: f64, samples: Vec<f64>) -> Self {
        let n = samples.len();
        assert!(n >= 4 && n % 2 == 0, "need an even sample count ≥ 4");
        assert!(period > 0.0);
        let half = n / 2;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for k in 0..=half {
            let (mut sa, mut sb) = (0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                // Reduce k·j mod n so the angle stays small and the table is exact at j = 0.
                let ang = 2.0 * PI * ((k * j) % n) as f64 / n as f64;
                sa += v * ang.cos();
                sb += v * ang.sin();
            }
            let scale = if k == 0 || k == half { 1.0 } else { 2.0 } / n as f64;
            a[k] = sa * scale;
            b[k] = if k == half { 0.0 } else { sb * scale };
        }
        Self { x0, period, samples, a, b }
    }

    pub fn from_fn(x0: f64, period: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let samples = (0..n).map(|k| f(x0 + period * k as f64 / n as f64)).collect();
        Self::from_samples(x0, period, samples)
    }

    pub fn zero(x0: f64, period: f64, n: usize) -> Self {
        Self::from_samples(x0, period, vec![0.0; n])
    }

    /// Real trigonometric polynomial `c + Σ (a_k cos + b_k sin)(2πk(x−x0)/τ)`, sampled.
    pub fn trig_polynomial(x0: f64, period: f64, n: usize, c: f64, cos: &[f64], sin: &[f64]) -> Self {
        Self::from_fn(x0, period, n, |x| {
            let t = 2.0 * PI * (x - x0) / period;
            let mut v = c;
            for (k, ck) in cos.iter().enumerate() {
                v += ck * ((k + 1) as f64 * t).cos();
            }
            for (k, sk) in sin.iter().enumerate() {
                v += sk * ((k + 1) as f64 * t).sin();
            }
            v
        })
    }

    pub fn origin(&self) -> f64 {
        self.x0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample abscissae `x0 + kτ/n`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|k| self.x0 + self.period * k as f64 / n as f64).collect()
    }

    /// `r`-th derivative of the interpolant.
    pub fn derivative(&self, x: f64, r: u32) -> f64 {
        let w = 2.0 * PI / self.period;
        let t = w * (x - self.x0);
        let t = t.rem_euclid(2.0 * PI);
        let mut v = if r == 0 { self.a[0] } else { 0.0 };
        for k in 1..self.a.len() {
            let kw = k as f64 * w;
            let (s, c) = (k as f64 * t).sin_cos();
            // d^r/dx^r of (a cos + b sin)(kt) cycles through the four phases.
            let (dc, ds) = match r % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            v += kw.powi(r as i32) * (self.a[k] * dc + self.b[k] * ds);
        }
        v
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    /// Mean by the rectangle rule on the samples (exact for the interpolant).
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// Largest absolute sample.
    pub fn sup(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup of the `r`-th derivative on a grid four times finer than the samples.
    pub fn derivative_sup(&self, r: u32) -> f64 {
        let m = 4 * self.len();
        (0..m)
            .map(|k| self.derivative(self.x0 + self.period * k as f64 / m as f64, r).abs())
            .fold(0.0, f64::max)
    }

    /// Derivative-only norm `max_{1≤i≤order} sup|D^i f|`.
    pub fn norm0(&self, order: u32) -> f64 {
        (1..=order).map(|i| self.derivative_sup(i)).fold(0.0, f64::max)
    }

    /// The function minus its mean.
    pub fn zero_mean(&self) -> Self {
        let m = self.mean();
        self.map_samples(|v| v - m)
    }

    pub fn map_samples(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_samples(self.x0, self.period, self.samples.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise `self + c·other` (same grid required).
    pub fn axpy(&self, c: f64, other: &PeriodicFn) -> Self {
        assert_eq!(self.len(), other.len());
        let s = self.samples.iter().zip(&other.samples).map(|(a, b)| a + c * b).collect();
        Self::from_samples(self.x0, self.period, s)
    }

    pub fn to_sampled(&self) -> SampledFunction {
        SampledFunction { period: self.period, samples: self.samples.clone() }
    }
}

impl ScalarFn for PeriodicFn {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn deriv(&self, x: f64) -> f64 {
        self.derivative(x, 1)
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.derivative(x, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig() -> PeriodicFn {
        PeriodicFn::trig_polynomial(-3.0, 1.0, 128, 0.2, &[0.01, 0.0, -0.003], &[0.0, 0.005, 0.0, 0.0, 0.0, 0.0, 0.0, 0.002])
    }

    #[test]
    fn interpolation_is_exact_for_band_limited() {
        let f = trig();
        let exact = |x: f64| {
            let t = 2.0 * PI * (x + 3.0);
            0.2 + 0.01 * t.cos() - 0.003 * (3.0 * t).cos() + 0.005 * (2.0 * t).sin() + 0.002 * (8.0 * t).sin()
        };
        for k in 0..50 {
            let x = -3.0 + 0.0371 * k as f64;
            assert!((f.eval(x) - exact(x)).abs() < 1e-14);
        }
        let d = |x: f64| {
            let t = 2.0 * PI * (x + 3.0);
            2.0 * PI * (-0.01 * t.sin() + 0.009 * (3.0 * t).sin() + 0.01 * (2.0 * t).cos() + 0.016 * (8.0 * t).cos())
        };
        assert!((f.derivative(-2.71, 1) - d(-2.71)).abs() < 1e-12);
        assert!((f.mean() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn periodic_evaluation_and_samples() {
        let f = trig();
        for (x, v) in f.grid().iter().zip(f.samples()) {
            assert!((f.eval(*x) - v).abs() < 1e-14);
        }
        assert!((f.eval(-2.3) - f.eval(-1.3)).abs() < 1e-14);
        assert!(f.zero_mean().mean().abs() < 1e-16);
    }

    #[test]
    fn norm0_of_sine() {
        let f = PeriodicFn::trig_polynomial(0.0, 1.0, 64, 0.0, &[], &[1.0]);
        let w = 2.0 * PI;
        assert!((f.norm0(2) - w * w).abs() < 1e-9);
        assert!((f.derivative_sup(1) - w).abs() < 1e-9);
    }
}
