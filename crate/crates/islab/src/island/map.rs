use super::polar::{plane_to_polar_jacobian, polar_to_plane_jacobian};
use super::{IslandError, SurgeryProfile};
use crate::symplectic::maps::{anosov_exponent, ANOSOV_MATRIX};
use crate::symplectic::{
    wrap_centered, Coordinates, Domain, HamiltonianSystem, IntegratorOrder, Jacobian2, MapDescriptor, MapError,
    PlanePoint,
};
use std::f64::consts::TAU;

/// The four fixed points of the cat map: the 2-torsion points of the torus.
pub const CENTERS: [PlanePoint; 4] = [
    PlanePoint::new(0.0, 0.0),
    PlanePoint::new(0.5, 0.0),
    PlanePoint::new(0.0, 0.5),
    PlanePoint::new(0.5, 0.5),
];

/// Which defining formula applies at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Outside every collar: the cat map.
    Outside,
    /// In the collar `V_i′ ∖ V_i` of center `i`: the blown-up cat map.
    Collar(usize),
    /// Inside `V_i` with `ρ > ρ₀`: the cut-off Hamiltonian flow.
    Flow(usize),
    /// Inside `V_i` with `ρ ≤ ρ₀`: the identity.
    Identity(usize),
}

/// The blown-up cat map `F̂` on the torus.
///
/// Around each center the cat map is the time-σ flow of `H = uv` in the
/// orthonormal eigen-chart `(u, v)`; in symplectic polar coordinates of that
/// chart `H = ρ sin 2θ`.
#[derive(Clone, Debug)]
pub struct IslandMap {
    profile: SurgeryProfile,
    sigma: f64,
    /// Columns: unit expanding and contracting eigenvectors of the cat matrix.
    chart: Jacobian2,
    flow: HamiltonianSystem,
}

/// Local data at a point: nearest center, displacement in the eigen-chart.
#[derive(Clone, Copy, Debug)]
struct Local {
    center: usize,
    w: PlanePoint,
    rho: f64,
}

impl IslandMap {
    pub const DEFAULT_FLOW_STEPS: usize = 96;

    pub fn new(profile: SurgeryProfile) -> Result<Self, IslandError> {
        Self::with_flow_steps(profile, Self::DEFAULT_FLOW_STEPS)
    }

    pub fn with_flow_steps(profile: SurgeryProfile, steps: usize) -> Result<Self, IslandError> {
        profile.validate()?;
        if steps == 0 {
            return Err(IslandError::InvalidProfile("flow step count must be at least 1".into()));
        }
        let sigma = anosov_exponent();
        let lu = sigma.exp();
        let eu = PlanePoint::new(8.0, lu - 13.0);
        let eu = eu * (1.0 / eu.norm());
        let es = PlanePoint::new(-eu.y, eu.x);
        let chart = Jacobian2::from_columns(eu, es);
        let d2h = profile.half_delta2();
        let h = move |rho: f64, th: f64| {
            let (xi, _, _) = profile.xi(rho);
            (rho - d2h) * (2.0 * th).sin() * xi
        };
        let grad = move |rho: f64, th: f64| {
            let (xi, xi1, _) = profile.xi(rho);
            let s = rho - d2h;
            [(2.0 * th).sin() * (xi + s * xi1), 2.0 * s * (2.0 * th).cos() * xi]
        };
        let hess = move |rho: f64, th: f64| {
            let (xi, xi1, xi2) = profile.xi(rho);
            let s = rho - d2h;
            let (s2, c2) = (2.0 * th).sin_cos();
            let hrt = 2.0 * c2 * (xi + s * xi1);
            [[s2 * (2.0 * xi1 + s * xi2), hrt], [hrt, -4.0 * s * s2 * xi]]
        };
        let flow = HamiltonianSystem::new(h, grad, hess, Coordinates::Polar)
            .with_steps(steps)
            .with_order(IntegratorOrder::Sixth);
        let map = Self { profile, sigma, chart, flow };
        map.check_flow_match()?;
        Ok(map)
    }

    /// The cat map must equal the time-σ flow of `uv` on each collar.
    fn check_flow_match(&self) -> Result<(), IslandError> {
        let fl = self.chart * Jacobian2::diag(self.sigma.exp(), (-self.sigma).exp()) * self.chart.transpose();
        let mut worst: f64 = 0.0;
        for k in 0..64 {
            let a = TAU * k as f64 / 64.0;
            let d = PlanePoint::new(a.cos(), a.sin()) * self.profile.epsilon;
            worst = worst.max(fl.apply(d).dist(ANOSOV_MATRIX.apply(d)));
        }
        if worst > 1e-8 {
            return Err(IslandError::FlowMismatch(worst));
        }
        Ok(())
    }

    pub fn profile(&self) -> &SurgeryProfile {
        &self.profile
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn centers(&self) -> [PlanePoint; 4] {
        CENTERS
    }

    /// Orthonormal eigen-chart (columns `e_u`, `e_s`).
    pub fn eigen_chart(&self) -> Jacobian2 {
        self.chart
    }

    /// The flow Hamiltonian inside the holes, in polar coordinates.
    pub fn flow_system(&self) -> &HamiltonianSystem {
        &self.flow
    }

    fn local(&self, p: PlanePoint) -> Local {
        let mut best = (0, PlanePoint::ORIGIN, f64::INFINITY);
        for (i, c) in CENTERS.iter().enumerate() {
            let d = PlanePoint::new(wrap_centered(p.x - c.x), wrap_centered(p.y - c.y));
            let n = d.dot(d);
            if n < best.2 {
                best = (i, d, n);
            }
        }
        let w = self.chart.transpose().apply(best.1);
        Local { center: best.0, w, rho: 0.5 * w.dot(w) }
    }

    fn from_local(&self, center: usize, w: PlanePoint) -> PlanePoint {
        CENTERS[center] + self.chart.apply(w)
    }

    fn to_cartesian(&self, juv: Jacobian2) -> Jacobian2 {
        self.chart * juv * self.chart.transpose()
    }

    /// Nearest center and the symplectic polar coordinates `(ρ, θ)` of `p` about it in the eigen-chart.
    pub fn local_polar(&self, p: PlanePoint) -> (usize, f64, f64) {
        let l = self.local(p.wrapped());
        (l.center, l.rho, l.w.y.atan2(l.w.x))
    }

    /// Point with eigen-chart polar coordinates `(ρ, θ)` about center `i`.
    pub fn point_from_polar(&self, center: usize, rho: f64, theta: f64) -> PlanePoint {
        let r = (2.0 * rho).sqrt();
        self.from_local(center, PlanePoint::new(r * theta.cos(), r * theta.sin())).wrapped()
    }

    pub fn regime(&self, p: PlanePoint) -> Regime {
        let l = self.local(p.wrapped());
        if l.rho >= self.profile.half_eps2() {
            Regime::Outside
        } else if l.rho <= self.profile.rho0 {
            Regime::Identity(l.center)
        } else if l.rho < self.profile.half_delta2() {
            Regime::Flow(l.center)
        } else {
            Regime::Collar(l.center)
        }
    }

    /// True when `p` lies in the open removed disc of some center (distance < δ − `slack`).
    pub fn in_hole(&self, p: PlanePoint, slack: f64) -> bool {
        let l = self.local(p.wrapped());
        (2.0 * l.rho).sqrt() < self.profile.delta - slack
    }

    /// Density of the invariant area form `ω̂ = Ψ*ω` with respect to `dx∧dy`.
    pub fn invariant_density(&self, p: PlanePoint) -> f64 {
        let l = self.local(p.wrapped());
        if l.rho >= self.profile.half_delta2() && l.rho < self.profile.half_eps2() {
            self.profile.psi(l.rho).1
        } else {
            1.0
        }
    }

    /// The cat map in eigen-chart polar coordinates over time `t`:
    /// returns `(p_t, p_t′, q_t, q_t′)` with `(ρ, θ) ↦ (ρ p_t(θ), q_t(θ))`.
    fn linear_polar(theta: f64, t: f64) -> (f64, f64, f64, f64) {
        let (s, c) = theta.sin_cos();
        let (e2, em2) = ((2.0 * t).exp(), (-2.0 * t).exp());
        let p = e2 * c * c + em2 * s * s;
        let p1 = (em2 - e2) * (2.0 * theta).sin();
        let q = ((-t).exp() * s).atan2(t.exp() * c);
        (p, p1, q, 1.0 / p)
    }

    /// Time-`t` flow of the cut-off Hamiltonian in polar coordinates.
    ///
    /// Uses the closed form while the orbit stays where the cutoff is 1,
    /// the symplectic integrator otherwise.
    pub fn flow_polar(&self, rho: f64, theta: f64, t: f64) -> Result<(f64, f64, Jacobian2), MapError> {
        let d2h = self.profile.half_delta2();
        let s = rho - d2h;
        let (p, p1, q, q1) = Self::linear_polar(theta, t);
        if s.abs() * p.max(1.0) <= d2h - self.profile.rho1 {
            return Ok((d2h + s * p, q, Jacobian2::new(p, s * p1, 0.0, q1)));
        }
        self.flow_polar_numeric(rho, theta, t)
    }

    /// Integrated flow, without the closed-form shortcut.
    pub fn flow_polar_numeric(&self, rho: f64, theta: f64, t: f64) -> Result<(f64, f64, Jacobian2), MapError> {
        let (z, j) = self.flow.flow(PlanePoint::new(rho, theta), t)?;
        Ok((z.x, z.y, j))
    }

    /// `Ψ⁻¹` at `q` (identity outside the collars), with its Jacobian.
    fn blowdown(&self, q: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        let q = q.wrapped();
        let l = self.local(q);
        if l.rho >= self.profile.half_eps2() {
            return Ok((q, Jacobian2::IDENTITY));
        }
        if l.rho == 0.0 {
            return Err(MapError::Undefined { map: "Psi^-1".into(), point: q, reason: "center has no preimage".into() });
        }
        let th = l.w.y.atan2(l.w.x);
        let r2 = self.profile.psi_inverse(l.rho);
        let d1 = self.profile.psi(r2).1;
        let jpol = Jacobian2::diag(1.0 / d1, 1.0);
        let r = (2.0 * r2).sqrt();
        let w2 = PlanePoint::new(r * th.cos(), r * th.sin());
        let juv = polar_to_plane_jacobian(r2, th) * jpol * plane_to_polar_jacobian(l.w);
        Ok((self.from_local(l.center, w2), self.to_cartesian(juv)))
    }

    /// `F̂` (for `forward`) or `F̂⁻¹` at `p`, with Jacobian.
    pub fn step_dir(&self, p: PlanePoint, forward: bool) -> Result<(PlanePoint, Jacobian2), MapError> {
        let t = if forward { self.sigma } else { -self.sigma };
        let p = p.wrapped();
        let l = self.local(p);
        let prof = &self.profile;
        if l.rho >= prof.half_eps2() {
            let a = if forward { ANOSOV_MATRIX } else { ANOSOV_MATRIX.inverse().expect("unimodular") };
            let (q, jb) = self.blowdown(a.apply(p))?;
            return Ok((q, jb * a));
        }
        if l.rho <= prof.rho0 {
            return Ok((p, Jacobian2::IDENTITY));
        }
        let th = l.w.y.atan2(l.w.x);
        let to_polar = plane_to_polar_jacobian(l.w);
        if l.rho < prof.half_delta2() {
            let (r1, th1, jpol) = self.flow_polar(l.rho, th, t)?;
            let r = (2.0 * r1).sqrt();
            let w1 = PlanePoint::new(r * th1.cos(), r * th1.sin());
            let juv = polar_to_plane_jacobian(r1, th1) * jpol * to_polar;
            return Ok((self.from_local(l.center, w1), self.to_cartesian(juv)));
        }
        let (ps, ps1, _) = prof.psi(l.rho);
        let (a, a1, b, b1) = Self::linear_polar(th, t);
        let rho_img = ps * a;
        let j1 = Jacobian2::new(ps1 * a, ps * a1, 0.0, b1);
        if rho_img < prof.half_eps2() {
            let r2 = prof.psi_inverse(rho_img);
            let d1 = prof.psi(r2).1;
            let jpol = Jacobian2::diag(1.0 / d1, 1.0) * j1;
            let r = (2.0 * r2).sqrt();
            let w2 = PlanePoint::new(r * b.cos(), r * b.sin());
            let juv = polar_to_plane_jacobian(r2, b) * jpol * to_polar;
            return Ok((self.from_local(l.center, w2), self.to_cartesian(juv)));
        }
        let r = (2.0 * rho_img).sqrt();
        let w1 = PlanePoint::new(r * b.cos(), r * b.sin());
        let j_uv = polar_to_plane_jacobian(rho_img, b) * j1 * to_polar;
        let (q, jb) = self.blowdown(self.from_local(l.center, w1))?;
        Ok((q, jb * self.to_cartesian(j_uv)))
    }

    pub fn step(&self, p: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        self.step_dir(p, true)
    }

    pub fn eval(&self, p: PlanePoint) -> Result<PlanePoint, MapError> {
        self.step(p).map(|r| r.0.wrapped())
    }

    pub fn eval_inverse(&self, q: PlanePoint) -> Result<PlanePoint, MapError> {
        self.step_dir(q, false).map(|r| r.0.wrapped())
    }

    /// `F̂` as a toral descriptor with exact inverse.
    pub fn descriptor(&self) -> MapDescriptor {
        let f = self.clone();
        let g = self.clone();
        MapDescriptor::new("F_hat", Domain::Torus, true, move |p| f.step(p)).with_inverse(move |q| g.eval_inverse(q))
    }

    /// `F̂⁻¹` as a toral descriptor.
    pub fn inverse_descriptor(&self) -> MapDescriptor {
        let f = self.clone();
        let g = self.clone();
        MapDescriptor::new("F_hat^-1", Domain::Torus, true, move |p| f.step_dir(p, false)).with_inverse(move |q| g.eval(q))
    }

    /// Determinant defect measured against the invariant form:
    /// `|ω̂(F̂p)/ω̂(p) · det DF̂(p) − 1|`.
    pub fn omega_hat_defect(&self, p: PlanePoint) -> Result<f64, MapError> {
        let (q, j) = self.step(p)?;
        Ok((self.invariant_density(q) * j.det() / self.invariant_density(p) - 1.0).abs())
    }
}
