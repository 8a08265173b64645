use super::{surgery_map, IslandError, IslandMap, CENTERS};
use crate::symplectic::maps::anosov_map;
use crate::symplectic::{wrap_centered, wrap_unit, Domain, PlanePoint, SaddleData};
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// A saddle of the island map on the boundary circle of a removed disc.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinkSaddle {
    pub link: usize,
    pub index: usize,
    /// Polar angle in the eigen-chart of the center.
    pub theta: f64,
    pub point: PlanePoint,
    pub unstable_eigenvalue: f64,
    pub stable_eigenvalue: f64,
    /// Eigenvalues of a finite-difference Jacobian of the integrated flow at the saddle.
    pub fd_unstable_eigenvalue: f64,
    pub fd_stable_eigenvalue: f64,
    /// `|F̂(p) − p|` at the refined saddle.
    pub fixed_point_residual: f64,
}

fn wrap_angle(a: f64) -> f64 {
    (a + PI).rem_euclid(TAU) - PI
}

/// Fixed points of `F̂` on `∂V_link`, found from sign changes of the angular
/// displacement and refined by bisection.
pub fn link_saddles(link: usize, map: &IslandMap) -> Result<Vec<LinkSaddle>, IslandError> {
    let err = |reason: String| IslandError::Saddle { link, reason };
    if link >= 4 {
        return Err(err("link index must be 0..4".into()));
    }
    let rho = map.profile().half_delta2();
    let disp = |th: f64| -> Result<f64, IslandError> {
        let p = map.point_from_polar(link, rho, th);
        let q = map.eval(p)?;
        let (_, _, th2) = map.local_polar(q);
        Ok(wrap_angle(th2 - th))
    };
    const GRID: usize = 720;
    let offset = 0.5 * TAU / GRID as f64 * 0.37;
    let mut roots = Vec::new();
    let mut prev_t = offset;
    let mut prev = disp(prev_t)?;
    for k in 1..=GRID {
        let t = offset + TAU * k as f64 / GRID as f64;
        let g = disp(t)?;
        if prev.signum() != g.signum() && (g - prev).abs() < PI {
            let (mut lo, mut hi, mut glo) = (prev_t, t, prev);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = disp(mid)?;
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(wrap_unit((0.5 * (lo + hi)) / TAU) * TAU);
        }
        prev = g;
        prev_t = t;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out = Vec::new();
    for (index, th) in roots.into_iter().enumerate() {
        let p = map.point_from_polar(link, rho, th);
        let (q, j) = map.step(p)?;
        let res = Domain::Torus.distance(q, p);
        let s = SaddleData::from_jacobian(p, j).ok_or_else(|| err(format!("fixed point at theta = {th} is not a saddle")))?;
        let h = 1e-7;
        let f = |r: f64, t: f64| map.flow_polar_numeric(r, t, map.sigma()).map(|(a, b, _)| PlanePoint::new(a, b));
        let dr = (f(rho + h, th)? - f(rho - h, th)?) * (0.5 / h);
        let dt = (f(rho, th + h)? - f(rho, th - h)?) * (0.5 / h);
        let fd = crate::symplectic::Jacobian2::from_columns(dr, dt);
        let fs = SaddleData::from_jacobian(p, fd).ok_or_else(|| err("finite-difference Jacobian is not hyperbolic".into()))?;
        out.push(LinkSaddle {
            link,
            index,
            theta: th,
            point: p,
            unstable_eigenvalue: s.unstable_eigenvalue,
            stable_eigenvalue: s.stable_eigenvalue,
            fd_unstable_eigenvalue: fs.unstable_eigenvalue,
            fd_stable_eigenvalue: fs.stable_eigenvalue,
            fixed_point_residual: res,
        });
    }
    Ok(out)
}

/// Sup-norm defects of the symmetry, identity and conjugacy properties of `F̂`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SymmetryReport {
    pub samples: usize,
    /// `sup |F̂(−p) + F̂(p)|` (mod Z²).
    pub equivariance_defect: f64,
    /// `sup |F̂(p) − p|` over points with `ρ < ρ₀`, centers included.
    pub identity_defect: f64,
    /// `sup |Ψ(F̂ p) − F_A(Ψ p)|` over collar points.
    pub conjugacy_defect: f64,
}

/// Quasi-random point `k` of a deterministic sequence in the unit square.
pub fn r2_point(k: usize) -> (f64, f64) {
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_3;
    (wrap_unit(0.5 + A1 * k as f64), wrap_unit(0.5 + A2 * k as f64))
}

/// `Ψ` on the closed island: blow-up about the center whose collar contains `p`.
pub fn blowup_point(map: &IslandMap, p: PlanePoint) -> Result<PlanePoint, IslandError> {
    let (i, rho, _) = map.local_polar(p);
    if rho >= map.profile().half_eps2() {
        return Ok(p.wrapped());
    }
    Ok(surgery_map(i, *map.profile()).eval(p)?)
}

pub fn symmetry_and_identity_report(map: &IslandMap, samples: usize) -> Result<SymmetryReport, IslandError> {
    let prof = *map.profile();
    let mut eq: f64 = 0.0;
    for k in 0..samples {
        let (x, y) = r2_point(k);
        let p = PlanePoint::new(x, y);
        let a = map.eval(-p)?;
        let b = map.eval(p)?;
        eq = eq.max(PlanePoint::new(wrap_centered(a.x + b.x), wrap_centered(a.y + b.y)).norm());
    }
    let mut id: f64 = 0.0;
    for c in CENTERS {
        id = id.max(Domain::Torus.distance(map.eval(c)?, c));
    }
    for k in 0..samples {
        let (u, v) = r2_point(k + samples);
        let p = map.point_from_polar(k % 4, prof.rho0 * u * 0.999_999, TAU * v);
        id = id.max(Domain::Torus.distance(map.eval(p)?, p));
    }
    let fa = anosov_map();
    let mut conj: f64 = 0.0;
    for k in 0..samples {
        let (u, v) = r2_point(k + 2 * samples);
        let rho = prof.half_delta2() + (prof.half_eps2() - prof.half_delta2()) * (0.001 + 0.999 * u);
        let p = map.point_from_polar(k % 4, rho, TAU * v);
        let lhs = blowup_point(map, map.eval(p)?)?;
        let rhs = fa.eval(blowup_point(map, p)?)?;
        conj = conj.max(Domain::Torus.distance(lhs, rhs));
    }
    Ok(SymmetryReport { samples, equivariance_defect: eq, identity_defect: id, conjugacy_defect: conj })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::island::SurgeryProfile;

    #[test]
    fn four_saddles_per_link() {
        let map = IslandMap::new(SurgeryProfile::default()).unwrap();
        let e2s = (2.0 * map.sigma()).exp();
        for link in 0..4 {
            let s = link_saddles(link, &map).unwrap();
            assert_eq!(s.len(), 4);
            for (k, sd) in s.iter().enumerate() {
                assert!((sd.theta - k as f64 * PI / 2.0).abs() < 1e-9, "{sd:?}");
                assert!((sd.unstable_eigenvalue / e2s - 1.0).abs() < 1e-9);
                assert!((sd.stable_eigenvalue * e2s - 1.0).abs() < 1e-9);
                assert!((sd.fd_unstable_eigenvalue / e2s - 1.0).abs() < 1e-4, "{sd:?}");
            }
        }
    }
}
