use crate::symplectic::{MapDescriptor, PlanePoint};

use super::LinkError;

/// Default number of samples on a fundamental interval.
pub const CURVE_SAMPLES: usize = 257;

/// A graph `y = w(x)` over `[x0, x1]`, uniformly sampled and evaluated by
/// piecewise cubic Hermite interpolation with fourth-order slope estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphCurve {
    x0: f64,
    x1: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl GraphCurve {
    pub fn from_samples(x0: f64, x1: f64, values: Vec<f64>) -> Result<Self, LinkError> {
        if !(x0 < x1) || values.len() < 5 {
            return Err(LinkError::Geometry(format!("bad curve interval [{x0}, {x1}] with {} samples", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(LinkError::Geometry(format!("non-finite curve sample at index {i}")));
        }
        let h = (x1 - x0) / (values.len() - 1) as f64;
        let slopes = slopes4(&values, h);
        Ok(Self { x0, x1, values, slopes })
    }

    pub fn from_fn(x0: f64, x1: f64, n: usize, w: impl Fn(f64) -> f64) -> Result<Self, LinkError> {
        let h = (x1 - x0) / (n - 1) as f64;
        Self::from_samples(x0, x1, (0..n).map(|k| w(x0 + h * k as f64)).collect())
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        (self.x1 - self.x0) / (self.values.len() - 1) as f64
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.values.len()).map(|k| self.x0 + h * k as f64).collect()
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let h = self.step();
        let n = self.values.len() - 1;
        let i = (((x - self.x0) / h).floor().max(0.0) as usize).min(n - 1);
        let t = (x - self.x0) / h - i as f64;
        (i, t, h)
    }

    /// Value at `x`; `None` outside the interval (a relative slack of 1e-12 is allowed).
    pub fn eval(&self, x: f64) -> Option<f64> {
        let slack = 1e-12 * (self.x1 - self.x0);
        if x < self.x0 - slack || x > self.x1 + slack {
            return None;
        }
        Some(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        let (i, t, h) = self.locate(x);
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1
    }

    /// Derivative of the interpolant.
    pub fn slope(&self, x: f64) -> f64 {
        let (i, t, h) = self.locate(x);
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * p0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * p1 + (3.0 * t2 - 2.0 * t) * m1) / h
    }

    /// Interpolation error estimate: the largest gap between the cubic
    /// interpolant and the samples of a half-resolution interpolant.
    pub fn interpolation_error_estimate(&self) -> f64 {
        let n = self.values.len();
        if n < 9 {
            return f64::NAN;
        }
        let coarse: Vec<f64> = self.values.iter().step_by(2).copied().collect();
        let x1 = self.x0 + self.step() * (2 * (coarse.len() - 1)) as f64;
        let Ok(c) = GraphCurve::from_samples(self.x0, x1, coarse) else { return f64::NAN };
        (0..n)
            .filter(|k| k % 2 == 1)
            .map(|k| {
                let x = self.x0 + self.step() * k as f64;
                c.eval(x).map_or(0.0, |v| (v - self.values[k]).abs())
            })
            .fold(0.0, f64::max)
            / 16.0
    }
}

fn slopes4(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h)
            } else if i < 2 {
                let s = &v[i..i + 5];
                let d = (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]) / (12.0 * h);
                if i == 0 {
                    d
                } else {
                    (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h)
                }
            } else {
                let m = n - 1;
                if i == m {
                    (25.0 * v[m] - 48.0 * v[m - 1] + 36.0 * v[m - 2] - 16.0 * v[m - 3] + 3.0 * v[m - 4]) / (12.0 * h)
                } else {
                    (3.0 * v[m] + 10.0 * v[m - 1] - 18.0 * v[m - 2] + 6.0 * v[m - 3] - v[m - 4]) / (12.0 * h)
                }
            }
        })
        .collect()
}

/// `f^#`: the image of the graph of `c` under `f`, re-parameterised over x.
///
/// The output interval is the image of the input interval; each output
/// sample is found by bisection between bracketing input samples followed
/// by two Newton steps.
pub fn graph_transform(f: &MapDescriptor, c: &GraphCurve) -> Result<GraphCurve, LinkError> {
    let xs = c.abscissae();
    let n = xs.len();
    let img: Vec<PlanePoint> =
        xs.iter().zip(c.values()).map(|(&x, &y)| f.eval(PlanePoint::new(x, y))).collect::<Result<_, _>>()?;
    let ix: Vec<f64> = img.iter().map(|p| p.x).collect();
    let increasing = ix[n - 1] > ix[0];
    for k in 1..n {
        if (ix[k] > ix[k - 1]) != increasing || ix[k] == ix[k - 1] {
            return Err(LinkError::Transversality { x: xs[k] });
        }
    }
    let (lo, hi) = if increasing { (ix[0], ix[n - 1]) } else { (ix[n - 1], ix[0]) };
    let image_x = |s: f64| -> Result<(f64, f64, f64), LinkError> {
        let w = c.eval(s).ok_or(LinkError::OutsideCurve { x: s, lo: xs[0], hi: xs[n - 1] })?;
        let (q, j) = f.step(PlanePoint::new(s, w))?;
        let dw = c.slope(s);
        Ok((q.x, q.y, j.a11 + j.a12 * dw))
    };
    let h_out = (hi - lo) / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let target = if k == n - 1 { hi } else { lo + h_out * k as f64 };
        // Bracketing sample pair.
        let pos = if increasing {
            ix.partition_point(|&v| v < target)
        } else {
            ix.partition_point(|&v| v > target)
        };
        let j = pos.clamp(1, n - 1);
        let (mut a, mut b) = (xs[j - 1], xs[j]);
        let fa = ix[j - 1] - target;
        for _ in 0..40 {
            let m = 0.5 * (a + b);
            let (xm, _, _) = image_x(m)?;
            if ((xm - target) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        let mut s = 0.5 * (a + b);
        for _ in 0..2 {
            let (xm, _, d) = image_x(s)?;
            if d != 0.0 {
                s -= (xm - target) / d;
            }
        }
        out.push(image_x(s)?.1);
    }
    GraphCurve::from_samples(lo, hi, out)
}

/// The image of a horizontal segment `{(s, level) : s ∈ [s0, s1]}` under a
/// map, read as a graph over x. Evaluation solves for the parameter, so no
/// interpolation error accumulates along a chain of maps.
#[derive(Clone)]
pub struct ImageCurve {
    map: MapDescriptor,
    level: f64,
    params: Vec<f64>,
    xs: Vec<f64>,
    increasing: bool,
}

impl ImageCurve {
    pub fn new(map: MapDescriptor, level: f64, s0: f64, s1: f64, samples: usize) -> Result<Self, LinkError> {
        let params: Vec<f64> = (0..samples).map(|k| s0 + (s1 - s0) * k as f64 / (samples - 1) as f64).collect();
        let xs: Vec<f64> =
            params.iter().map(|&s| map.eval(PlanePoint::new(s, level)).map(|p| p.x)).collect::<Result<_, _>>()?;
        let increasing = xs[samples - 1] > xs[0];
        for k in 1..samples {
            if (xs[k] > xs[k - 1]) != increasing || xs[k] == xs[k - 1] {
                return Err(LinkError::Transversality { x: params[k] });
            }
        }
        Ok(Self { map, level, params, xs, increasing })
    }

    /// x-range covered by the curve.
    pub fn x_range(&self) -> (f64, f64) {
        let (a, b) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if self.increasing {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// The curve point with abscissa `x`.
    pub fn point_at(&self, x: f64) -> Result<PlanePoint, LinkError> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return Err(LinkError::OutsideCurve { x, lo, hi });
        }
        let n = self.xs.len();
        let pos = if self.increasing {
            self.xs.partition_point(|&v| v < x)
        } else {
            self.xs.partition_point(|&v| v > x)
        };
        let j = pos.clamp(1, n - 1);
        let (mut a, mut b) = (self.params[j - 1], self.params[j]);
        let (xa, xb) = (self.xs[j - 1], self.xs[j]);
        let mut s = a + (b - a) * (x - xa) / (xb - xa);
        let tol = 1e-14 * (1.0 + x.abs());
        for _ in 0..60 {
            let (q, jac) = self.map.step(PlanePoint::new(s, self.level))?;
            let g = q.x - x;
            if g.abs() <= tol {
                return Ok(q);
            }
            // Keep the bracket and fall back to bisection when Newton leaves it.
            if (g > 0.0) == self.increasing {
                b = s;
            } else {
                a = s;
            }
            let d = jac.a11;
            let next = if d != 0.0 { s - g / d } else { f64::NAN };
            s = if next.is_finite() && next > a.min(b) && next < a.max(b) { next } else { 0.5 * (a + b) };
            if (b - a).abs() <= 1e-16 * (1.0 + s.abs()) {
                return Ok(self.map.eval(PlanePoint::new(s, self.level))?);
            }
        }
        Err(LinkError::RootFailure { x })
    }

    pub fn value_at(&self, x: f64) -> Result<f64, LinkError> {
        self.point_at(x).map(|p| p.y)
    }

    /// Sample over `[x0, x1]` into a [`GraphCurve`].
    pub fn to_graph(&self, x0: f64, x1: f64, n: usize) -> Result<GraphCurve, LinkError> {
        let h = (x1 - x0) / (n - 1) as f64;
        let v = (0..n).map(|k| self.value_at(x0 + h * k as f64)).collect::<Result<Vec<_>, _>>()?;
        GraphCurve::from_samples(x0, x1, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::maps::{affine_map, shear_map, translation};
    use crate::symplectic::scalar::scalar_fn;
    use crate::symplectic::Jacobian2;

    fn w(x: f64) -> f64 {
        1.0 + 0.01 * (2.0 * std::f64::consts::PI * x).sin() + 0.002 * (6.0 * x).cos()
    }

    #[test]
    fn cubic_interpolation_is_fourth_order() {
        let c = GraphCurve::from_fn(0.0, 1.0, CURVE_SAMPLES, w).unwrap();
        let err = (0..1000).map(|k| (c.eval(k as f64 / 999.0).unwrap() - w(k as f64 / 999.0)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!(c.interpolation_error_estimate() < 1e-9);
        assert!(c.eval(1.1).is_none());
    }

    #[test]
    fn translation_shifts_graph() {
        let c = GraphCurve::from_fn(0.0, 1.0, 65, w).unwrap();
        let t = graph_transform(&translation(PlanePoint::new(0.5, 0.0)), &c).unwrap();
        assert_eq!(t.interval(), (0.5, 1.5));
        for x in [0.6, 0.9, 1.3] {
            assert!((t.eval(x).unwrap() - c.eval(x - 0.5).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn shear_subtracts_function() {
        let c = GraphCurve::from_fn(0.0, 1.0, 129, w).unwrap();
        let minus = scalar_fn(|x: f64| -0.003 * x * x, |x| -0.006 * x, |_| -0.006);
        let t = graph_transform(&shear_map(minus), &c).unwrap();
        for x in [0.1, 0.5, 0.77] {
            assert!((t.eval(x).unwrap() - (w(x) - 0.003 * x * x)).abs() < 1e-9);
        }
    }

    #[test]
    fn contraction_rule_substitution() {
        // (x, y) ↦ (−x/2 + c, −2y + d): w̃(X) = d − 2 w(2(c − X)).
        let (cc, d) = (3.0, 1.0);
        let f = affine_map("lin", Jacobian2::new(-0.5, 0.0, 0.0, -2.0), PlanePoint::new(cc, d));
        let c = GraphCurve::from_fn(0.0, 1.0, CURVE_SAMPLES, w).unwrap();
        let t = graph_transform(&f, &c).unwrap();
        assert_eq!(t.interval(), (2.5, 3.0));
        for x in [2.55, 2.7, 2.95] {
            assert!((t.eval(x).unwrap() - (d - 2.0 * w(2.0 * (cc - x)))).abs() < 1e-9);
        }
    }

    #[test]
    fn image_curve_matches_graph_transform() {
        let f = affine_map("lin", Jacobian2::new(-0.5, 0.0, 0.0, -2.0), PlanePoint::new(3.0, 1.0));
        let c = ImageCurve::new(f, 0.25, 0.0, 1.0, 17).unwrap();
        assert_eq!(c.x_range(), (2.5, 3.0));
        assert!((c.value_at(2.8).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(c.value_at(3.2), Err(LinkError::OutsideCurve { .. })));
    }
}
