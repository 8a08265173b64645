//! Finite-time Lyapunov exponents, grid entropy estimates and the cone
//! expansion certificate.

use crate::symplectic::{Jacobian2, MapDescriptor, MapError, PlanePoint, Rect};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LyapunovError {
    #[error("horizon must be at least 1")]
    Horizon,
    #[error("grid resolution must be at least 8 per axis, got {0}x{1}")]
    Resolution(usize, usize),
    #[error("orbit of ({}, {}) entered an excluded region at step {step}", point.x, point.y)]
    Excluded { point: PlanePoint, step: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A finite-time exponent along one orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentSample {
    pub initial: PlanePoint,
    pub n: usize,
    /// `log ‖Df^n(p)‖` (operator 2-norm).
    pub log_sum: f64,
    /// `log_sum / n`.
    pub lambda: f64,
    /// `(1/n) log |Df^n(p) v₀|` for the seed direction `v₀ = (1,1)/√2`.
    pub tangent_lambda: f64,
}

/// The seed tangent direction `(1, 1)/√2`.
pub fn seed_direction() -> PlanePoint {
    PlanePoint::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
}

/// Maximal finite-time Lyapunov exponent `(1/n) log ‖Df^n(p)‖`.
///
/// The derivative product is renormalised every step; the seed tangent
/// vector is carried along for the one-vector estimate.
pub fn max_lyapunov(f: &MapDescriptor, p: PlanePoint, n: usize) -> Result<ExponentSample, LyapunovError> {
    max_lyapunov_excluding(f, p, n, &|_| false)
}

/// As [`max_lyapunov`], failing with [`LyapunovError::Excluded`] if the orbit
/// (initial point included) meets the region described by `excluded`.
pub fn max_lyapunov_excluding(
    f: &MapDescriptor,
    p: PlanePoint,
    n: usize,
    excluded: &(dyn Fn(PlanePoint) -> bool + Sync),
) -> Result<ExponentSample, LyapunovError> {
    if n == 0 {
        return Err(LyapunovError::Horizon);
    }
    let mut x = p;
    let mut m = Jacobian2::IDENTITY;
    let mut log_scale = 0.0;
    let mut v = seed_direction();
    let mut tangent = 0.0;
    for step in 0..n {
        if excluded(x) {
            return Err(LyapunovError::Excluded { point: p, step });
        }
        let (y, j) = f.step(x)?;
        m = j * m;
        let s = m.max_abs();
        if s != 1.0 {
            m = m.scale(1.0 / s);
            log_scale += s.ln();
        }
        let w = j.apply(v);
        let (nw, nv) = (w.norm(), v.norm());
        tangent += (nw / nv).ln();
        v = w * (1.0 / nw);
        x = y;
    }
    if excluded(x) {
        return Err(LyapunovError::Excluded { point: p, step: n });
    }
    let norm = m.norm2();
    let log_sum = log_scale + if norm == 1.0 { 0.0 } else { norm.ln() };
    Ok(ExponentSample { initial: p, n, log_sum, lambda: log_sum / n as f64, tangent_lambda: tangent / n as f64 })
}

/// `(λ_n, λ_2n, |λ_n − λ_2n|)`.
pub fn stability_probe(f: &MapDescriptor, p: PlanePoint, n: usize) -> Result<(f64, f64, f64), LyapunovError> {
    let a = max_lyapunov(f, p, n)?.lambda;
    let b = max_lyapunov(f, p, 2 * n)?.lambda;
    Ok((a, b, (a - b).abs()))
}

/// Midpoint grid over a rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub region: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(region: Rect, nx: usize, ny: usize) -> Result<Self, LyapunovError> {
        if nx < 8 || ny < 8 {
            return Err(LyapunovError::Resolution(nx, ny));
        }
        Ok(Self { region, nx, ny })
    }

    /// The unit square.
    pub fn torus(n: usize) -> Result<Self, LyapunovError> {
        Self::new(Rect::new(0.0, 1.0, 0.0, 1.0), n, n)
    }

    pub fn cell_area(&self) -> f64 {
        self.region.area() / (self.nx * self.ny) as f64
    }

    /// Midpoint of cell `k`, row-major with `x` fastest.
    pub fn midpoint(&self, k: usize) -> PlanePoint {
        let (i, j) = (k % self.nx, k / self.nx);
        PlanePoint::new(
            self.region.x0 + (i as f64 + 0.5) * self.region.width() / self.nx as f64,
            self.region.y0 + (j as f64 + 0.5) * self.region.height() / self.ny as f64,
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exponent of one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub valid: bool,
}

/// Grid estimate of the entropy integral of the positive exponent.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub grid: GridSpec,
    pub n: usize,
    pub threshold: f64,
    #[serde(skip)]
    pub cells: Vec<CellResult>,
    pub valid_cells: usize,
    /// `Σ_valid max(λ_n, 0) · cell area`.
    pub estimate: f64,
    /// Fraction of valid cells with `λ_n ≥ threshold`.
    pub fraction_above: f64,
}

impl EntropyReport {
    pub fn mean_lambda(&self) -> f64 {
        let v: Vec<f64> = self.cells.iter().filter(|c| c.valid).map(|c| c.lambda).collect();
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    }
}

/// Entropy estimate over every cell of the grid.
pub fn entropy_estimate(f: &MapDescriptor, grid: GridSpec, n: usize) -> Result<EntropyReport, LyapunovError> {
    entropy_estimate_excluding(f, grid, n, &|_| false)
}

/// Entropy estimate where cells whose orbit meets `excluded` (or escapes) are marked invalid
/// and contribute nothing.
pub fn entropy_estimate_excluding(
    f: &MapDescriptor,
    grid: GridSpec,
    n: usize,
    excluded: &(dyn Fn(PlanePoint) -> bool + Sync),
) -> Result<EntropyReport, LyapunovError> {
    if n == 0 {
        return Err(LyapunovError::Horizon);
    }
    let cells: Vec<CellResult> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let p = grid.midpoint(k);
            match max_lyapunov_excluding(f, p, n, excluded) {
                Ok(s) if s.lambda.is_finite() => CellResult { x: p.x, y: p.y, lambda: s.lambda, valid: true },
                _ => CellResult { x: p.x, y: p.y, lambda: f64::NAN, valid: false },
            }
        })
        .collect();
    let threshold = 4f64.ln();
    let mut sum = 0.0;
    let mut valid = 0usize;
    let mut above = 0usize;
    for c in cells.iter().filter(|c| c.valid) {
        valid += 1;
        sum += c.lambda.max(0.0);
        if c.lambda >= threshold {
            above += 1;
        }
    }
    Ok(EntropyReport {
        grid,
        n,
        threshold,
        valid_cells: valid,
        estimate: sum * grid.cell_area(),
        fraction_above: if valid == 0 { 0.0 } else { above as f64 / valid as f64 },
        cells,
    })
}

/// Outcome of the cone expansion check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateResult {
    pub holds: bool,
    /// First step (1-based) at which the check failed.
    pub failed_step: Option<usize>,
    /// Per step: `log` of the smaller ℓ¹ growth of the two generators.
    pub growth_log: Vec<f64>,
}

/// Required per-step ℓ¹ growth of the cone generators.
pub const CONE_FACTOR: f64 = 4.0;

fn cone_step_ok(j: &Jacobian2) -> (bool, f64) {
    let g1 = PlanePoint::new(j.a11, j.a21);
    let g2 = PlanePoint::new(j.a12, j.a22);
    let inside = g1.x >= 0.0 && g1.y >= 0.0 && g2.x >= 0.0 && g2.y >= 0.0;
    let growth = (g1.x.abs() + g1.y.abs()).min(g2.x.abs() + g2.y.abs());
    (inside && growth >= CONE_FACTOR, growth.ln())
}

/// Checks, along `n` steps of the orbit of `p`, that each derivative maps the
/// closed positive quadrant into itself and stretches both generators by at
/// least 4 in the ℓ¹ norm. By convexity this gives `|Df^n v|₁ ≥ 4^n |v|₁` for
/// every `v` in the quadrant.
pub fn cone_certificate(f: &MapDescriptor, p: PlanePoint, n: usize) -> Result<CertificateResult, LyapunovError> {
    cone_certificate_with(|x| f.step(x), p, n)
}

/// [`cone_certificate`] for an arbitrary derivative cocycle.
pub fn cone_certificate_with(
    step: impl Fn(PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError>,
    p: PlanePoint,
    n: usize,
) -> Result<CertificateResult, LyapunovError> {
    let mut x = p;
    let mut log = Vec::with_capacity(n);
    for k in 1..=n {
        let (y, j) = step(x)?;
        let (ok, g) = cone_step_ok(&j);
        log.push(g);
        if !ok {
            return Ok(CertificateResult { holds: false, failed_step: Some(k), growth_log: log });
        }
        x = y;
    }
    Ok(CertificateResult { holds: true, failed_step: None, growth_log: log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::maps::{anosov_exponent, anosov_map, rotation, torus_identity};

    #[test]
    fn identity_has_zero_exponent() {
        let s = max_lyapunov(&torus_identity(), PlanePoint::new(0.2, 0.3), 17).unwrap();
        assert_eq!(s.lambda, 0.0);
        let r = entropy_estimate(&torus_identity(), GridSpec::torus(8).unwrap(), 5).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn anosov_exponent_and_entropy() {
        let s = max_lyapunov(&anosov_map(), PlanePoint::new(0.123, 0.77), 50).unwrap();
        assert!((s.lambda - anosov_exponent()).abs() < 1e-6);
        let r = entropy_estimate(&anosov_map(), GridSpec::torus(10).unwrap(), 50).unwrap();
        assert!((r.estimate - anosov_exponent()).abs() < 1e-6);
        assert_eq!(r.fraction_above, 1.0);
    }

    #[test]
    fn cone_certificates() {
        let c = cone_certificate(&anosov_map(), PlanePoint::new(0.3, 0.1), 40).unwrap();
        assert!(c.holds && c.growth_log.len() == 40);
        let r = cone_certificate(&rotation(std::f64::consts::FRAC_PI_2), PlanePoint::new(0.3, 0.1), 40).unwrap();
        assert_eq!(r.failed_step, Some(1));
    }

    #[test]
    fn rejects_coarse_grid() {
        assert_eq!(GridSpec::torus(7).unwrap_err(), LyapunovError::Resolution(7, 7));
    }
}
