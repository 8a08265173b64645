use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::symplectic::maps::shear_map;
use crate::symplectic::scalar::{Scalar, ScaledFn};
use crate::symplectic::{chain, MapDescriptor};

use super::chart::TimeEnergyChart;
use super::curve::ImageCurve;
use super::model::{Side, SuitableModel};
use super::periodic::{PeriodicFn, PERIODIC_SAMPLES};
use super::LinkError;

/// Tolerance on `sup|M^a(F, 0)|` for link a to count as intact.
pub const LINK_INTACT_TOL: f64 = 1e-8;

const BRACKET_SAMPLES: usize = 33;

/// Splitting functions of one model: charts are built once and the
/// ψ-independent unstable sides are cached.
pub struct Splitter {
    model: SuitableModel,
    chart_a: TimeEnergyChart,
    chart_b: TimeEnergyChart,
    samples: usize,
    unstable_a: OnceLock<Vec<f64>>,
    unstable_b: OnceLock<Vec<f64>>,
}

impl Splitter {
    pub fn new(model: &SuitableModel) -> Result<Self, LinkError> {
        Ok(Self {
            model: model.clone(),
            chart_a: TimeEnergyChart::new(model, Side::A)?,
            chart_b: TimeEnergyChart::new(model, Side::B)?,
            samples: PERIODIC_SAMPLES,
            unstable_a: OnceLock::new(),
            unstable_b: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &SuitableModel {
        &self.model
    }

    pub fn chart(&self, side: Side) -> &TimeEnergyChart {
        match side {
            Side::A => &self.chart_a,
            Side::B => &self.chart_b,
        }
    }

    /// Abscissae of the splitting-function samples.
    pub fn grid(&self, side: Side) -> Vec<f64> {
        let (x0, _) = self.model.geometry().fundamental(side);
        let tau = self.model.geometry().tau;
        (0..self.samples).map(|k| x0 + tau * k as f64 / self.samples as f64).collect()
    }

    fn margin(&self) -> f64 {
        0.5 * self.model.geometry().delta
    }

    fn check_support(&self, side: Side, psi: &Scalar) -> Result<(), LinkError> {
        let g = self.model.geometry();
        let (lo, hi) = g.support_zone(side);
        for k in 0..=400 {
            let t = k as f64 / 400.0;
            for x in [lo - g.tau * t, hi + g.tau * t] {
                let v = psi.value(x);
                if v != 0.0 {
                    return Err(LinkError::SupportViolation { x, value: v });
                }
            }
        }
        Ok(())
    }

    /// Unstable curve in chart coordinates: `φ∘F` of the inflow segment.
    pub fn unstable_curve(&self, side: Side) -> Result<ImageCurve, LinkError> {
        let g = self.model.geometry();
        let m = self.margin();
        let (f, phi, s0, s1) = match side {
            Side::A => (self.model.f_a(), &self.chart_a, g.x_a - m, g.x_a + g.tau + m),
            Side::B => (self.model.f_b(), &self.chart_b, g.x_b - g.tau - m, g.x_b + m),
        };
        ImageCurve::new(chain(&[f, phi.descriptor()]), g.y1, s0, s1, BRACKET_SAMPLES)
    }

    /// Stable curve of `S_ψ∘F` in the chart `φ_ψ = φ∘S_{−ψ}`.
    ///
    /// a-side: the inflow segment at `y1` left of the strip pulled back
    /// twice; b-side: the inflow segment at `y2` pulled back seven times,
    /// the middle three steps through the excursion.
    pub fn stable_curve(&self, side: Side, psi: &Scalar) -> Result<ImageCurve, LinkError> {
        let g = self.model.geometry();
        let m = self.margin();
        let minus: Scalar = Arc::new(ScaledFn(-1.0, psi.clone()));
        let s = shear_map(minus).renamed("S_-psi");
        let (maps, level, s0, s1): (Vec<MapDescriptor>, f64, f64, f64) = match side {
            Side::A => {
                let fi = self.model.f_a_inv();
                (
                    vec![s.clone(), fi.clone(), s.clone(), fi, s, self.chart_a.descriptor()],
                    g.y1,
                    g.x_a - 3.0 * g.tau - m,
                    g.x_a - 2.0 * g.tau + m,
                )
            }
            Side::B => {
                let fy = self.model.f_y2_inv();
                let mut v = vec![s.clone()];
                for _ in 0..3 {
                    v.push(fy.clone());
                    v.push(s.clone());
                }
                v.push(self.model.f_excursion_inv());
                v.push(s.clone());
                v.push(self.model.f_b_inv());
                v.push(s);
                v.push(self.chart_b.descriptor());
                (v, g.y2, g.x_b - m, g.x_b + 0.5 * g.tau + m)
            }
        };
        ImageCurve::new(chain(&maps), level, s0, s1, BRACKET_SAMPLES)
    }

    fn sample(&self, curve: &ImageCurve, xs: &[f64]) -> Result<Vec<f64>, LinkError> {
        xs.par_iter().map(|&x| curve.value_at(x)).collect()
    }

    fn unstable_samples(&self, side: Side) -> Result<&Vec<f64>, LinkError> {
        let cell = match side {
            Side::A => &self.unstable_a,
            Side::B => &self.unstable_b,
        };
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = self.sample(&self.unstable_curve(side)?, &self.grid(side))?;
        Ok(cell.get_or_init(|| v))
    }

    /// `M = w^u − w^s` on the fundamental interval of `side`.
    pub fn splitting(&self, side: Side, psi: &Scalar) -> Result<PeriodicFn, LinkError> {
        self.check_support(side, psi)?;
        let xs = self.grid(side);
        let wu = self.unstable_samples(side)?;
        let ws = self.sample(&self.stable_curve(side, psi)?, &xs)?;
        let g = self.model.geometry();
        let m = wu.iter().zip(&ws).map(|(u, s)| u - s).collect();
        Ok(PeriodicFn::from_samples(xs[0], g.tau, m))
    }

    pub fn splitting_a(&self, psi: &Scalar) -> Result<PeriodicFn, LinkError> {
        self.splitting(Side::A, psi)
    }

    /// `M^b`, after checking that link a is intact.
    pub fn splitting_b(&self, psi: &Scalar) -> Result<PeriodicFn, LinkError> {
        let d = self.link_a_defect()?;
        if d > LINK_INTACT_TOL {
            return Err(LinkError::LinkABroken(d));
        }
        self.splitting(Side::B, psi)
    }

    /// `sup|M^a(F, 0)|`.
    pub fn link_a_defect(&self) -> Result<f64, LinkError> {
        let zero: Scalar = Arc::new(crate::symplectic::scalar::Zero);
        Ok(self.splitting(Side::A, &zero)?.sup())
    }
}

/// `M^a(S_ψ∘F, φ^a_ψ)` for a single ψ.
pub fn splitting_a(model: &SuitableModel, psi: &Scalar) -> Result<PeriodicFn, LinkError> {
    Splitter::new(model)?.splitting_a(psi)
}

/// `M^b(S_ψ∘F, φ^b_ψ)` for a single ψ.
pub fn splitting_b(model: &SuitableModel, psi: &Scalar) -> Result<PeriodicFn, LinkError> {
    Splitter::new(model)?.splitting_b(psi)
}

/// Closed form of `M^a` at `F̊`: `ψ(x) + ψ(x−τ)`.
pub fn closed_form_a(psi: &Scalar, tau: f64, x: f64) -> f64 {
    psi.value(x) + psi.value(x - tau)
}

/// Closed form of `M^b` at `F̊`:
/// `ψ(x) + ψ(x+τ) − ½ Σ_{j=1..4} ψ((3x_b + jτ − x)/2)`.
pub fn closed_form_b(psi: &Scalar, tau: f64, x_b: f64, x: f64) -> f64 {
    let back: f64 = (1..=4).map(|j| psi.value((3.0 * x_b + j as f64 * tau - x) / 2.0)).sum();
    psi.value(x) + psi.value(x + tau) - 0.5 * back
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::bump::Bumped;
    use crate::links::model::Geometry;
    use crate::symplectic::scalar::Zero;

    fn trig(x0: f64) -> PeriodicFn {
        PeriodicFn::trig_polynomial(x0, 1.0, 128, 0.003, &[0.004, 0.0, -0.002], &[0.001, 0.003, 0.0, 0.0, 0.0, 0.0, 0.0, 0.001])
    }

    #[test]
    fn closed_forms_at_normal_form() {
        let g = Geometry::default();
        let m = SuitableModel::unperturbed(g).unwrap();
        let sp = Splitter::new(&m).unwrap();
        let psi_a = Bumped::new(g.partition(Side::A), trig(g.x_a - g.tau)).into_scalar();
        let ma = sp.splitting_a(&psi_a).unwrap();
        for (x, v) in sp.grid(Side::A).iter().zip(ma.samples()) {
            assert!((v - closed_form_a(&psi_a, g.tau, *x)).abs() < 1e-12);
        }
        let psi_b = Bumped::new(g.partition(Side::B), trig(g.x_b)).into_scalar();
        let mb = sp.splitting_b(&psi_b).unwrap();
        for (x, v) in sp.grid(Side::B).iter().zip(mb.samples()) {
            assert!((v - closed_form_b(&psi_b, g.tau, g.x_b, *x)).abs() < 1e-12, "{x}");
        }
        assert!(mb.mean().abs() < 1e-14);
        let zero: Scalar = Arc::new(Zero);
        assert_eq!(sp.splitting_b(&zero).unwrap().sup(), 0.0);
    }

    #[test]
    fn support_violation_rejected() {
        let g = Geometry::default();
        let m = SuitableModel::unperturbed(g).unwrap();
        let psi: Scalar = Arc::new(trig(0.0));
        assert!(matches!(splitting_a(&m, &psi), Err(LinkError::SupportViolation { .. })));
    }
}
