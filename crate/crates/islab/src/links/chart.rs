use crate::symplectic::scalar::smooth_transition;
use crate::symplectic::{Domain, Jacobian2, MapDescriptor, MapError, PlanePoint};

use super::model::{Side, SuitableModel};
use super::LinkError;

/// Steps of the RK4 integration of the area correction `σ`.
pub const SIGMA_STEPS: usize = 64;

/// A time-energy chart `φ(x, y) = φ₀(x, σ(x, y))` with
/// `φ₀ = (1−ρ)·id + ρ·F̊∘F⁻¹` and `∂_y σ = 1 / det Dφ₀(x, σ)`.
///
/// `ρ` switches from 0 to 1 across the fundamental interval in the
/// direction of motion, so `φ = id` where points enter and `φ = F̊∘F⁻¹`
/// one step later; hence `φ∘F = F̊∘φ` on the entry strip.
#[derive(Clone)]
pub struct TimeEnergyChart {
    side: Side,
    ramp_start: f64,
    ramp_width: f64,
    rising: bool,
    blend: Option<MapDescriptor>,
    y_base: f64,
}

impl std::fmt::Debug for TimeEnergyChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeEnergyChart")
            .field("side", &self.side)
            .field("identity", &self.blend.is_none())
            .field("ramp", &(self.ramp_start, self.ramp_width))
            .finish()
    }
}

impl TimeEnergyChart {
    /// Build the chart of `F` on one side of the model.
    pub fn new(model: &SuitableModel, side: Side) -> Result<Self, LinkError> {
        let g = model.geometry();
        let (x0, _) = g.fundamental(side);
        let ramp_start = x0 + g.delta;
        let ramp_width = g.tau - 2.0 * g.delta;
        let blend = if model.perturbation().is_identity() { None } else { Some(model.normal_after_inverse()) };
        // Below every perturbation support the blend is the identity, so
        // the integration can start there.
        let lowest = model.perturbation().support.iter().map(|r| r.y0).fold(f64::INFINITY, f64::min);
        let y_base = (lowest - 1e-3).max(g.y1 - g.band);
        let chart = Self { side, ramp_start, ramp_width, rising: side == Side::B, blend, y_base };
        chart.check_blend(model)?;
        Ok(chart)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_identity(&self) -> bool {
        self.blend.is_none()
    }

    /// The bump `ρ` and its derivative.
    pub fn rho(&self, x: f64) -> (f64, f64) {
        let (r, r1, _) = smooth_transition((x - self.ramp_start) / self.ramp_width);
        let r1 = r1 / self.ramp_width;
        if self.rising {
            (r, r1)
        } else {
            (1.0 - r, -r1)
        }
    }

    /// `φ₀` and its Jacobian.
    pub fn blend_step(&self, p: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        let Some(gi) = &self.blend else { return Ok((p, Jacobian2::IDENTITY)) };
        let (r, r1) = self.rho(p.x);
        if r == 0.0 && r1 == 0.0 {
            return Ok((p, Jacobian2::IDENTITY));
        }
        let (q, dq) = gi.step(p)?;
        let d = q - p;
        let out = p * (1.0 - r) + q * r;
        let j = Jacobian2::IDENTITY.scale(1.0 - r).add(&dq.scale(r)).add(&Jacobian2::new(r1 * d.x, 0.0, r1 * d.y, 0.0));
        Ok((out, j))
    }

    fn inv_det(&self, x: f64, s: f64) -> Result<f64, MapError> {
        let (_, j) = self.blend_step(PlanePoint::new(x, s))?;
        let det = j.det();
        if !(det > 0.0) {
            return Err(MapError::SingularJacobian { point: PlanePoint::new(x, s) });
        }
        Ok(1.0 / det)
    }

    /// `σ(x, y)` by RK4 from `σ(x, y_base) = y_base` with a fixed step count.
    pub fn sigma(&self, x: f64, y: f64) -> Result<f64, MapError> {
        if self.blend.is_none() {
            return Ok(y);
        }
        let (r, r1) = self.rho(x);
        if (r == 0.0 || r == 1.0) && r1 == 0.0 {
            return Ok(y);
        }
        let h = (y - self.y_base) / SIGMA_STEPS as f64;
        let mut s = self.y_base;
        for _ in 0..SIGMA_STEPS {
            let k1 = self.inv_det(x, s)?;
            let k2 = self.inv_det(x, s + 0.5 * h * k1)?;
            let k3 = self.inv_det(x, s + 0.5 * h * k2)?;
            let k4 = self.inv_det(x, s + h * k3)?;
            s += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        }
        Ok(s)
    }

    /// `φ` and its Jacobian `Dφ₀(x, σ)·[[1, 0], [σ_x, σ_y]]`.
    pub fn step(&self, p: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        if self.blend.is_none() {
            return Ok((p, Jacobian2::IDENTITY));
        }
        let s = self.sigma(p.x, p.y)?;
        let (q, j0) = self.blend_step(PlanePoint::new(p.x, s))?;
        let (r, r1) = self.rho(p.x);
        if (r == 0.0 || r == 1.0) && r1 == 0.0 {
            return Ok((q, j0));
        }
        let hx = 1e-6;
        let sx = (self.sigma(p.x + hx, p.y)? - self.sigma(p.x - hx, p.y)?) / (2.0 * hx);
        let sy = 1.0 / j0.det();
        Ok((q, j0 * Jacobian2::new(1.0, 0.0, sx, sy)))
    }

    pub fn eval(&self, p: PlanePoint) -> Result<PlanePoint, MapError> {
        if self.blend.is_none() {
            return Ok(p);
        }
        let s = self.sigma(p.x, p.y)?;
        self.blend_step(PlanePoint::new(p.x, s)).map(|(q, _)| q)
    }

    pub fn descriptor(&self) -> MapDescriptor {
        let me = self.clone();
        let name = match self.side {
            Side::A => "phi_a",
            Side::B => "phi_b",
        };
        MapDescriptor::new(name, Domain::Plane, true, move |p| me.step(p))
    }

    /// `det Dφ − 1` from a fourth-order central difference of `φ` itself.
    pub fn area_defect(&self, p: PlanePoint) -> Result<f64, MapError> {
        let h = 5e-4;
        let d = |e: PlanePoint| -> Result<PlanePoint, MapError> {
            let f = |t: f64| self.eval(p + e * t);
            Ok((f(-2.0 * h)? - f(2.0 * h)? + (f(h)? - f(-h)?) * 8.0) * (1.0 / (12.0 * h)))
        };
        let dx = d(PlanePoint::new(1.0, 0.0))?;
        let dy = d(PlanePoint::new(0.0, 1.0))?;
        Ok(dx.x * dy.y - dx.y * dy.x - 1.0)
    }

    /// The blend `φ₀` must be a diffeomorphism on the strip.
    fn check_blend(&self, model: &SuitableModel) -> Result<(), LinkError> {
        if self.blend.is_none() {
            return Ok(());
        }
        let g = model.geometry();
        for i in 0..=16 {
            let x = self.ramp_start + self.ramp_width * i as f64 / 16.0;
            for k in 0..=8 {
                let y = g.y1 - 0.15 + 0.3 * k as f64 / 8.0;
                let (_, j) = self.blend_step(PlanePoint::new(x, y))?;
                if !(j.det() > 0.5) {
                    return Err(LinkError::ChartNotInvertible { x, y });
                }
            }
        }
        Ok(())
    }

    /// `sup |φ∘F − F̊∘φ|` over a grid on the entry strip `N`.
    pub fn conjugacy_residual(&self, model: &SuitableModel) -> Result<f64, LinkError> {
        let g = model.geometry();
        let (x0, x1) = g.fundamental(self.side);
        let entry = if self.side == Side::A { x1 } else { x0 };
        let (f, f0) = match self.side {
            Side::A => (model.f_a(), model.normal_a()),
            Side::B => (model.f_b(), model.normal_b()),
        };
        let mut worst: f64 = 0.0;
        for i in 0..=10 {
            let x = entry - 0.5 * g.delta + g.delta * i as f64 / 10.0;
            for k in 0..=10 {
                let y = g.y1 - 0.1 + 0.2 * k as f64 / 10.0;
                let z = PlanePoint::new(x, y);
                let lhs = self.eval(f.eval(z)?)?;
                let rhs = f0.eval(self.eval(z)?)?;
                worst = worst.max(lhs.dist(rhs));
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::model::{random_bumps, Geometry, Perturbation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perturbed() -> SuitableModel {
        let geom = Geometry::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bumps = random_bumps(&mut rng, &geom, &[Side::A, Side::B], 1e-3);
        SuitableModel::new(geom, Perturbation::from_bumps(&bumps)).unwrap()
    }

    #[test]
    fn identity_for_unperturbed_model() {
        let m = SuitableModel::unperturbed(Geometry::default()).unwrap();
        let c = TimeEnergyChart::new(&m, Side::A).unwrap();
        assert!(c.is_identity());
        let p = PlanePoint::new(-3.4, 1.02);
        assert_eq!(c.eval(p).unwrap(), p);
    }

    #[test]
    fn conjugacy_and_area() {
        let m = perturbed();
        for side in [Side::A, Side::B] {
            let c = TimeEnergyChart::new(&m, side).unwrap();
            assert!(c.conjugacy_residual(&m).unwrap() <= 1e-12);
            let (x0, _) = m.geometry().fundamental(side);
            for k in 1..8 {
                let p = PlanePoint::new(x0 + k as f64 / 8.0, 1.0 + 0.01 * k as f64 - 0.04);
                let d = c.area_defect(p).unwrap();
                assert!(d.abs() <= 1e-9, "{side:?} {p:?}: {d:e}");
                let (_, j) = c.step(p).unwrap();
                assert!((j.det() - 1.0).abs() < 1e-12);
            }
        }
    }
}
