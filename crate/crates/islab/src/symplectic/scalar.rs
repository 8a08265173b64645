use std::fmt;
use std::sync::Arc;

/// A smooth real function of one variable with its first two derivatives.
pub trait ScalarFn: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
    /// Second derivative; the default uses a central difference of `deriv`.
    fn deriv2(&self, x: f64) -> f64 {
        let h = 1e-5 * (1.0 + x.abs());
        (self.deriv(x + h) - self.deriv(x - h)) / (2.0 * h)
    }
}

/// Shared handle to a scalar function.
pub type Scalar = Arc<dyn ScalarFn>;

/// The zero function.
#[derive(Clone, Copy, Debug, Default)]
pub struct Zero;

impl ScalarFn for Zero {
    fn value(&self, _: f64) -> f64 {
        0.0
    }
    fn deriv(&self, _: f64) -> f64 {
        0.0
    }
    fn deriv2(&self, _: f64) -> f64 {
        0.0
    }
}

/// Polynomial `Σ c_k x^k`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }
}

impl ScalarFn for Polynomial {
    fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
    fn deriv(&self, x: f64) -> f64 {
        self.derivative().value(x)
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.derivative().derivative().value(x)
    }
}

/// Sum of a scalar function list.
#[derive(Clone)]
pub struct SumFn(pub Vec<Scalar>);

impl ScalarFn for SumFn {
    fn value(&self, x: f64) -> f64 {
        self.0.iter().map(|f| f.value(x)).sum()
    }
    fn deriv(&self, x: f64) -> f64 {
        self.0.iter().map(|f| f.deriv(x)).sum()
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.0.iter().map(|f| f.deriv2(x)).sum()
    }
}

/// `c · f`.
#[derive(Clone)]
pub struct ScaledFn(pub f64, pub Scalar);

impl ScalarFn for ScaledFn {
    fn value(&self, x: f64) -> f64 {
        self.0 * self.1.value(x)
    }
    fn deriv(&self, x: f64) -> f64 {
        self.0 * self.1.deriv(x)
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.0 * self.1.deriv2(x)
    }
}

/// `f · g`.
#[derive(Clone)]
pub struct ProductFn(pub Scalar, pub Scalar);

impl ScalarFn for ProductFn {
    fn value(&self, x: f64) -> f64 {
        self.0.value(x) * self.1.value(x)
    }
    fn deriv(&self, x: f64) -> f64 {
        self.0.deriv(x) * self.1.value(x) + self.0.value(x) * self.1.deriv(x)
    }
    fn deriv2(&self, x: f64) -> f64 {
        self.0.deriv2(x) * self.1.value(x) + 2.0 * self.0.deriv(x) * self.1.deriv(x) + self.0.value(x) * self.1.deriv2(x)
    }
}

/// A scalar function given by closures for value and derivatives.
pub struct ClosureFn<V, D, D2> {
    pub value: V,
    pub deriv: D,
    pub deriv2: D2,
}

impl<V, D, D2> ScalarFn for ClosureFn<V, D, D2>
where
    V: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
    D2: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }
    fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }
    fn deriv2(&self, x: f64) -> f64 {
        (self.deriv2)(x)
    }
}

impl fmt::Debug for dyn ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarFn")
    }
}

/// Build a shared scalar function from value, derivative and second-derivative closures.
pub fn scalar_fn<V, D, D2>(value: V, deriv: D, deriv2: D2) -> Scalar
where
    V: Fn(f64) -> f64 + Send + Sync + 'static,
    D: Fn(f64) -> f64 + Send + Sync + 'static,
    D2: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(ClosureFn { value, deriv, deriv2 })
}

/// Quintic smoothstep `6t⁵ − 15t⁴ + 10t³`, clamped to `[0,1]`; returns value and two derivatives.
pub fn smoothstep5(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if t >= 1.0 {
        (1.0, 0.0, 0.0)
    } else {
        let t2 = t * t;
        let t3 = t2 * t;
        (
            t3 * (10.0 + t * (-15.0 + 6.0 * t)),
            30.0 * t2 * (1.0 - t) * (1.0 - t),
            60.0 * t * (1.0 - t) * (1.0 - 2.0 * t),
        )
    }
}

/// Smooth (C^∞) transition from 0 at `t ≤ 0` to 1 at `t ≥ 1`; value and two derivatives.
pub fn smooth_transition(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    // r = a/(a+b), a = e^{-1/t}, b = e^{-1/(1-t)}
    let f = |s: f64| -> (f64, f64, f64) {
        let e = (-1.0 / s).exp();
        let d1 = e / (s * s);
        let d2 = e * (1.0 - 2.0 * s) / s.powi(4);
        (e, d1, d2)
    };
    let (a, a1, a2) = f(t);
    let (b, b1, b2) = f(1.0 - t);
    let (b1, b2) = (-b1, b2);
    let s = a + b;
    let s1 = a1 + b1;
    let s2 = a2 + b2;
    let r = a / s;
    let r1 = (a1 * s - a * s1) / (s * s);
    // r'' from (r s)'' = a''.
    let r2 = (a2 - 2.0 * r1 * s1 - r * s2) / s;
    (r, r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivs(f: impl Fn(f64) -> (f64, f64, f64), pts: &[f64]) {
        let h = 1e-6;
        for &t in pts {
            let (_, d1, d2) = f(t);
            let fd1 = (f(t + h).0 - f(t - h).0) / (2.0 * h);
            let fd2 = (f(t + h).1 - f(t - h).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-7 * (1.0 + d1.abs()), "d1 at {t}: {d1} vs {fd1}");
            assert!((d2 - fd2).abs() < 1e-6 * (1.0 + d2.abs()), "d2 at {t}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn smoothstep_derivatives() {
        check_derivs(smoothstep5, &[0.1, 0.3, 0.5, 0.77, 0.95]);
        assert_eq!(smoothstep5(0.5).0, 0.5);
    }

    #[test]
    fn transition_derivatives_and_symmetry() {
        check_derivs(smooth_transition, &[0.05, 0.2, 0.5, 0.8, 0.97]);
        for t in [0.1, 0.37, 0.5, 0.8] {
            let a = smooth_transition(t).0 + smooth_transition(1.0 - t).0;
            assert!((a - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn polynomial_eval() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.value(2.0), 9.0);
        assert_eq!(p.deriv(2.0), 10.0);
        assert_eq!(p.deriv2(2.0), 6.0);
    }
}
