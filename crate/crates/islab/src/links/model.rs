use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::symplectic::maps::{affine_map, identity_map, shear_map};
use crate::symplectic::scalar::Scalar;
use crate::symplectic::{
    compose, hamiltonian_time_map, Coordinates, Domain, HamiltonianSystem, IntegratorOrder, Jacobian2, MapDescriptor,
    MapError, PlanePoint, Rect,
};

use super::bump::PartitionBump;
use super::LinkError;

/// Which link of the bi-link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// Constants of the two-strip model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub tau: f64,
    pub x_a: f64,
    pub x_b: f64,
    pub y1: f64,
    pub y2: f64,
    /// Support margin of corrections and perturbations.
    pub delta: f64,
    /// Half-height of the strips around `y1` and `y2`.
    pub band: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self { tau: 1.0, x_a: -3.0, x_b: 2.0, y1: 1.0, y2: -1.0, delta: 0.1, band: 0.25 }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<(), LinkError> {
        let g = self;
        let bad = |m: &str| Err(LinkError::Geometry(m.to_string()));
        if !(g.tau > 0.0) {
            return bad("tau must be positive");
        }
        if !(g.x_a + g.tau < g.x_b - g.tau) {
            return bad("strips overlap: need x_a + tau < x_b - tau");
        }
        if !(g.y2 < g.y1) {
            return bad("need y2 < y1");
        }
        if !(g.delta > 0.0 && g.delta < g.tau / 4.0) {
            return bad("need 0 < delta < tau/4");
        }
        if !(g.band > 0.1 && 2.0 * g.band < g.y1 - g.y2) {
            return bad("band half-height must exceed 0.1 and the two bands must be disjoint");
        }
        Ok(())
    }

    /// Offset `θ` of the contraction rule `(x, y) ↦ θ − (x/2, 2y)`.
    pub fn theta(&self) -> PlanePoint {
        PlanePoint::new(1.5 * self.x_b + 2.0 * self.tau, 2.0 * self.y1 + self.y2)
    }

    /// Fundamental interval of the splitting function on each side.
    pub fn fundamental(&self, side: Side) -> (f64, f64) {
        match side {
            Side::A => (self.x_a - self.tau, self.x_a),
            Side::B => (self.x_b, self.x_b + self.tau),
        }
    }

    /// Interval that must contain the support of a correction `ψ`.
    pub fn support_zone(&self, side: Side) -> (f64, f64) {
        match side {
            Side::A => (self.x_a - 2.0 * self.tau + self.delta, self.x_a - self.delta),
            Side::B => (self.x_b + self.delta, self.x_b + 2.0 * self.tau - self.delta),
        }
    }

    /// The partition bump `ρ` of the solver on each side.
    pub fn partition(&self, side: Side) -> PartitionBump {
        let start = match side {
            Side::A => self.x_a - 2.0 * self.tau,
            Side::B => self.x_b,
        };
        PartitionBump::new(start, self.tau, self.delta)
    }

    fn margin(&self) -> f64 {
        0.5 * self.tau
    }

    fn band_rect(&self, x0: f64, x1: f64, y: f64) -> Rect {
        Rect::new(x0, x1, y - self.band, y + self.band)
    }
}

/// A compactly supported bump Hamiltonian
/// `H = amp · b((x−cx)/wx) · b((y−cy)/wy)`, `b(u) = (1−u²)⁶` on `|u| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpHamiltonian {
    pub cx: f64,
    pub cy: f64,
    pub wx: f64,
    pub wy: f64,
    pub amp: f64,
}

const BUMP_POWER: i32 = 6;

fn bump3(u: f64) -> (f64, f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let n = BUMP_POWER as f64;
    let q = 1.0 - u * u;
    let b = q.powi(BUMP_POWER);
    let b1 = -2.0 * n * u * q.powi(BUMP_POWER - 1);
    let b2 = -2.0 * n * q.powi(BUMP_POWER - 1) + 4.0 * n * (n - 1.0) * u * u * q.powi(BUMP_POWER - 2);
    (b, b1, b2)
}

/// `max |b'|` and `max b` for the profile `b`.
fn bump_extrema() -> (f64, f64) {
    // b' peaks where u² = 1/(2n−1).
    let u = (1.0 / (2.0 * BUMP_POWER as f64 - 1.0)).sqrt();
    (bump3(u).1.abs(), 1.0)
}

impl BumpHamiltonian {
    /// Bump with `sup|∇H| = size` (signed by `sign`).
    pub fn with_gradient_size(cx: f64, cy: f64, wx: f64, wy: f64, size: f64) -> Self {
        let (d, b) = bump_extrema();
        let per_amp = (d * b / wx).max(d * b / wy);
        Self { cx, cy, wx, wy, amp: size / per_amp }
    }

    pub fn support(&self) -> Rect {
        Rect::new(self.cx - self.wx, self.cx + self.wx, self.cy - self.wy, self.cy + self.wy)
    }

    fn parts(&self, x: f64, y: f64) -> ((f64, f64, f64), (f64, f64, f64)) {
        (bump3((x - self.cx) / self.wx), bump3((y - self.cy) / self.wy))
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let ((bx, _, _), (by, _, _)) = self.parts(x, y);
        self.amp * bx * by
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let ((bx, dx, _), (by, dy, _)) = self.parts(x, y);
        [self.amp * dx / self.wx * by, self.amp * bx * dy / self.wy]
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let ((bx, dx, ddx), (by, dy, ddy)) = self.parts(x, y);
        let (wx, wy) = (self.wx, self.wy);
        let hxy = self.amp * dx * dy / (wx * wy);
        [[self.amp * ddx / (wx * wx) * by, hxy], [hxy, self.amp * bx * ddy / (wy * wy)]]
    }
}

/// A symplectic perturbation `G` (so that `F = G∘F̊`) with a record of
/// where it differs from the identity.
#[derive(Clone)]
pub struct Perturbation {
    pub map: MapDescriptor,
    pub support: Vec<Rect>,
    pub label: String,
}

impl std::fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Perturbation").field("label", &self.label).field("support", &self.support).finish()
    }
}

impl Perturbation {
    pub fn identity() -> Self {
        Self { map: identity_map(), support: Vec::new(), label: "identity".into() }
    }

    /// One implicit-midpoint step of unit length for the sum of the bumps.
    /// The step is exactly symplectic, equals the identity off the supports
    /// and its inverse is the step of length −1.
    pub fn from_bumps(bumps: &[BumpHamiltonian]) -> Self {
        if bumps.is_empty() {
            return Self::identity();
        }
        let (b1, b2, b3) = (bumps.to_vec(), bumps.to_vec(), bumps.to_vec());
        let sys = HamiltonianSystem::new(
            move |x, y| b1.iter().map(|b| b.value(x, y)).sum(),
            move |x, y| {
                b2.iter().fold([0.0, 0.0], |acc, b| {
                    let g = b.gradient(x, y);
                    [acc[0] + g[0], acc[1] + g[1]]
                })
            },
            move |x, y| {
                b3.iter().fold([[0.0; 2]; 2], |acc, b| {
                    let h = b.hessian(x, y);
                    [[acc[0][0] + h[0][0], acc[0][1] + h[0][1]], [acc[1][0] + h[1][0], acc[1][1] + h[1][1]]]
                })
            },
            Coordinates::Cartesian,
        )
        .with_steps(1)
        .with_order(IntegratorOrder::Second);
        let map = hamiltonian_time_map(&sys, 1.0).renamed("G");
        Self { map, support: bumps.iter().map(|b| b.support()).collect(), label: format!("{} bump(s)", bumps.len()) }
    }

    /// Vertical shear `S_η` with `η` supported in `[x0, x1]`.
    pub fn shear(eta: Scalar, x0: f64, x1: f64) -> Self {
        Self {
            map: shear_map(eta).renamed("S_eta"),
            support: vec![Rect::new(x0, x1, f64::NEG_INFINITY, f64::INFINITY)],
            label: "shear".into(),
        }
    }

    /// `S_ψ∘G`, with `ψ` supported in `[x0, x1]`.
    pub fn then_shear(&self, psi: Scalar, x0: f64, x1: f64) -> Self {
        let mut support = self.support.clone();
        support.push(Rect::new(x0, x1, f64::NEG_INFINITY, f64::INFINITY));
        Self { map: compose(&shear_map(psi), &self.map), support, label: format!("shear∘{}", self.label) }
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }
}

/// Random bump perturbation of gradient size `size` on the requested sides.
pub fn random_bumps<R: Rng>(rng: &mut R, geom: &Geometry, sides: &[Side], size: f64) -> Vec<BumpHamiltonian> {
    sides
        .iter()
        .map(|&side| {
            let (lo, hi) = geom.support_zone(side);
            let half = 0.5 * (hi - lo);
            let wx = rng.gen_range(0.55..0.9) * half;
            let cx = rng.gen_range(lo + wx..=hi - wx);
            let wy = rng.gen_range(0.05..0.08);
            let reach = 0.1 - wy;
            let cy = geom.y1 + rng.gen_range(-reach..=reach);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            BumpHamiltonian::with_gradient_size(cx, cy, wx, wy, sign * size)
        })
        .collect()
}

/// The suitable two-strip model: the piecewise normal form `F̊` together
/// with a perturbation hook `G`, `F = G∘F̊`.
#[derive(Clone, Debug)]
pub struct SuitableModel {
    geom: Geometry,
    perturbation: Perturbation,
}

fn piece(name: &str, a: Jacobian2, c: PlanePoint, domain: Rect) -> MapDescriptor {
    let m = affine_map(name, a, c);
    let m2 = m.clone();
    MapDescriptor::new(name, Domain::Rects(vec![domain]), true, move |p| m.step(p))
        .with_inverse(move |q| m2.exact_inverse(q).expect("affine"))
}

impl SuitableModel {
    pub fn new(geom: Geometry, perturbation: Perturbation) -> Result<Self, LinkError> {
        geom.validate()?;
        let model = Self { geom, perturbation };
        model.check_perturbation_support()?;
        Ok(model)
    }

    pub fn unperturbed(geom: Geometry) -> Result<Self, LinkError> {
        Self::new(geom, Perturbation::identity())
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// Same geometry, different hook.
    pub fn with_perturbation(&self, perturbation: Perturbation) -> Result<Self, LinkError> {
        Self::new(self.geom, perturbation)
    }

    /// The perturbation must act inside one of the two correction zones,
    /// either near the `y1` strip or as a vertical shear.
    fn check_perturbation_support(&self) -> Result<(), LinkError> {
        let g = &self.geom;
        for r in &self.perturbation.support {
            let in_zone = |side: Side| {
                let (lo, hi) = g.support_zone(side);
                r.x0 >= lo - 1e-12 && r.x1 <= hi + 1e-12
            };
            let near_y1 = r.y0 >= g.y1 - g.band && r.y1 <= g.y1 + g.band;
            let vertical_shear = r.y0 == f64::NEG_INFINITY && r.y1 == f64::INFINITY;
            let ok = (in_zone(Side::A) || in_zone(Side::B)) && (near_y1 || vertical_shear);
            if !ok {
                return Err(LinkError::Geometry(format!(
                    "perturbation support [{}, {}]×[{}, {}] leaves the correction zones",
                    r.x0, r.x1, r.y0, r.y1
                )));
            }
        }
        Ok(())
    }

    // Pieces of F̊.

    /// `(x, y) ↦ (x−τ, y)` on the a-strip.
    pub fn normal_a(&self) -> MapDescriptor {
        let g = &self.geom;
        let m = g.margin();
        piece(
            "F0_a",
            Jacobian2::IDENTITY,
            PlanePoint::new(-g.tau, 0.0),
            g.band_rect(g.x_a - 3.0 * g.tau - m, g.x_a + g.tau + m, g.y1),
        )
    }

    /// `(x, y) ↦ (x+τ, y)` on the b-strip at `y1`.
    pub fn normal_b(&self) -> MapDescriptor {
        let g = &self.geom;
        let m = g.margin();
        piece("F0_b", Jacobian2::IDENTITY, PlanePoint::new(g.tau, 0.0), g.band_rect(g.x_b - g.tau - m, g.x_b + 2.0 * g.tau + m, g.y1))
    }

    /// `(x, y) ↦ (x−τ/2, y)` on the strip at `y2`.
    pub fn normal_y2(&self) -> MapDescriptor {
        let g = &self.geom;
        let m = g.margin();
        piece("F0_y2", Jacobian2::IDENTITY, PlanePoint::new(-0.5 * g.tau, 0.0), g.band_rect(g.x_b - m, g.x_b + 2.0 * g.tau + m, g.y2))
    }

    /// `F̊⁴ = θ − (x/2, 2y)` from a neighbourhood of `D₂ᵇ` into the `y2` strip.
    pub fn contraction(&self) -> MapDescriptor {
        let g = &self.geom;
        let m = g.margin();
        piece("F0^4", Jacobian2::diag(-0.5, -2.0), g.theta(), g.band_rect(g.x_b - m, g.x_b + g.tau + m, g.y1))
    }

    /// `F̊⁻³` on a neighbourhood of `K = [x_b+3τ/2, x_b+2τ] × {y2}`:
    /// one step along the `y2` strip followed by the inverse contraction.
    pub fn excursion_back(&self) -> MapDescriptor {
        let g = &self.geom;
        let m = g.margin();
        let th = g.theta();
        // C⁻¹(X) = (2(θx − X), (θy − Y)/2) after X ↦ X − τ/2.
        let a = Jacobian2::diag(-2.0, -0.5);
        let c = PlanePoint::new(2.0 * th.x + g.tau, 0.5 * th.y);
        piece("F0^-3", a, c, g.band_rect(g.x_b + 1.5 * g.tau - m, g.x_b + 2.0 * g.tau + m, g.y2))
    }

    // Pieces of F = G∘F̊ and their inverses.

    fn g(&self) -> &MapDescriptor {
        &self.perturbation.map
    }

    fn g_inv(&self) -> MapDescriptor {
        self.g().inverse_map().expect("perturbation has an exact inverse")
    }

    fn after_g(&self, f0: &MapDescriptor) -> MapDescriptor {
        compose(self.g(), f0)
    }

    fn before_g_inv(&self, f0: &MapDescriptor) -> MapDescriptor {
        let inv = f0.inverse_map().expect("normal-form pieces are invertible");
        compose(&inv, &self.g_inv())
    }

    pub fn f_a(&self) -> MapDescriptor {
        self.after_g(&self.normal_a()).renamed("F_a")
    }

    pub fn f_a_inv(&self) -> MapDescriptor {
        self.before_g_inv(&self.normal_a()).renamed("F_a^-1")
    }

    pub fn f_b(&self) -> MapDescriptor {
        self.after_g(&self.normal_b()).renamed("F_b")
    }

    pub fn f_b_inv(&self) -> MapDescriptor {
        self.before_g_inv(&self.normal_b()).renamed("F_b^-1")
    }

    pub fn f_y2_inv(&self) -> MapDescriptor {
        self.before_g_inv(&self.normal_y2()).renamed("F_y2^-1")
    }

    /// `F⁻³` on `K`: the perturbation is the identity along the excursion.
    pub fn f_excursion_inv(&self) -> MapDescriptor {
        compose(&self.excursion_back(), &self.g_inv()).renamed("F^-3_K")
    }

    /// `F̊∘F⁻¹ = G⁻¹`, the map blended into the time-energy chart.
    pub fn normal_after_inverse(&self) -> MapDescriptor {
        self.g_inv()
    }

    /// Check that `G` is the identity at `p`.
    pub fn perturbation_defect(&self, p: PlanePoint) -> Result<f64, MapError> {
        Ok(self.g().eval(p)?.dist(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_geometry_is_consistent() {
        Geometry::default().validate().unwrap();
        let bad = Geometry { x_b: -1.0, ..Geometry::default() };
        assert!(bad.validate().is_err());
        let bad = Geometry { y2: 2.0, ..Geometry::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn contraction_rule_and_excursion() {
        let m = SuitableModel::unperturbed(Geometry::default()).unwrap();
        let g = *m.geometry();
        let c = m.contraction();
        // D₂ᵇ = [x_b, x_b+τ]×{y1} goes onto [x_b+3τ/2, x_b+2τ]×{y2}.
        let p = c.eval(PlanePoint::new(g.x_b, g.y1)).unwrap();
        assert!((p.x - (g.x_b + 2.0 * g.tau)).abs() < 1e-15 && (p.y - g.y2).abs() < 1e-15);
        let q = c.eval(PlanePoint::new(g.x_b + g.tau, g.y1)).unwrap();
        assert!((q.x - (g.x_b + 1.5 * g.tau)).abs() < 1e-15);
        assert!((c.jacobian(PlanePoint::new(g.x_b, g.y1)).unwrap().det() - 1.0).abs() < 1e-15);
        // F̊⁻³ = F̊∘F̊⁻⁴ on K: x ↦ −2x + 3x_b + 5τ, y ↦ −y/2 + y2/2 + y1.
        let e = m.excursion_back();
        let z = PlanePoint::new(g.x_b + 1.7 * g.tau, g.y2 + 0.01);
        let w = e.eval(z).unwrap();
        assert!((w.x - (-2.0 * z.x + 3.0 * g.x_b + 5.0 * g.tau)).abs() < 1e-14);
        assert!((w.y - (-0.5 * z.y + 0.5 * g.y2 + g.y1)).abs() < 1e-14);
    }

    #[test]
    fn bump_perturbation_is_symplectic_and_local() {
        let geom = Geometry::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bumps = random_bumps(&mut rng, &geom, &[Side::A, Side::B], 1e-3);
        let p = Perturbation::from_bumps(&bumps);
        let model = SuitableModel::new(geom, p.clone()).unwrap();
        for b in &bumps {
            let z = PlanePoint::new(b.cx + 0.3 * b.wx, b.cy - 0.2 * b.wy);
            let (w, j) = p.map.step(z).unwrap();
            assert!(w.dist(z) > 1e-6 && w.dist(z) < 2e-3);
            assert!((j.det() - 1.0).abs() < 1e-13);
            let back = p.map.exact_inverse(w).unwrap().unwrap();
            assert!(back.dist(z) < 1e-15);
        }
        assert_eq!(model.perturbation_defect(PlanePoint::new(geom.x_b, geom.y2)).unwrap(), 0.0);
        assert_eq!(model.perturbation_defect(PlanePoint::new(geom.x_a, geom.y1)).unwrap(), 0.0);
    }

    #[test]
    fn bump_hessian_matches_gradient() {
        let b = BumpHamiltonian::with_gradient_size(0.1, 0.2, 0.5, 0.07, 1e-3);
        let (x, y, h) = (0.25, 0.22, 1e-7);
        let hs = b.hessian(x, y);
        let gx = (b.gradient(x + h, y)[0] - b.gradient(x - h, y)[0]) / (2.0 * h);
        let gy = (b.gradient(x, y + h)[1] - b.gradient(x, y - h)[1]) / (2.0 * h);
        let gxy = (b.gradient(x, y + h)[0] - b.gradient(x, y - h)[0]) / (2.0 * h);
        assert!((hs[0][0] - gx).abs() < 1e-7 && (hs[1][1] - gy).abs() < 1e-6 && (hs[0][1] - gxy).abs() < 1e-6);
        let gs = (0..200)
            .flat_map(|i| (0..200).map(move |j| (i, j)))
            .map(|(i, j)| {
                let g = b.gradient(-0.4 + i as f64 / 200.0, 0.13 + 0.14 * j as f64 / 200.0);
                g[0].hypot(g[1])
            })
            .fold(0.0, f64::max);
        assert!(gs <= 1e-3 * 1.01 && gs > 0.7e-3, "{gs}");
    }

    #[test]
    fn out_of_zone_perturbation_rejected() {
        let b = BumpHamiltonian::with_gradient_size(0.0, 1.0, 0.3, 0.05, 1e-3);
        assert!(SuitableModel::new(Geometry::default(), Perturbation::from_bumps(&[b])).is_err());
    }
}
