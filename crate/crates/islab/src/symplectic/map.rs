use super::point::wrap_centered;
use super::{Jacobian2, PlanePoint};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Errors raised while evaluating or manipulating maps.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MapError {
    #[error("point ({}, {}) lies outside the domain of `{map}`", point.x, point.y)]
    OutOfDomain { map: String, point: PlanePoint },
    #[error("composition `{map}`: intermediate point ({}, {}) is outside the domain of the outer map", point.x, point.y)]
    DomainMismatch { map: String, point: PlanePoint },
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { what: String, iterations: usize, residual: f64 },
    #[error("singular Jacobian at ({}, {})", point.x, point.y)]
    SingularJacobian { point: PlanePoint },
    #[error("point ({}, {}) is closer than h = {h:e} to the boundary of the domain", point.x, point.y)]
    BoundaryTooClose { point: PlanePoint, h: f64 },
    #[error("`{map}` is undefined at ({}, {}): {reason}", point.x, point.y)]
    Undefined { map: String, point: PlanePoint, reason: String },
    #[error("non-finite value produced by `{map}` at ({}, {})", point.x, point.y)]
    NonFinite { map: String, point: PlanePoint },
}

/// Closed axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// True when the closed `margin`-box around `p` lies inside.
    pub fn contains_with_margin(&self, p: PlanePoint, margin: f64) -> bool {
        p.x - margin >= self.x0 && p.x + margin <= self.x1 && p.y - margin >= self.y0 && p.y + margin <= self.y1
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        o.x0 >= self.x0 && o.x1 <= self.x1 && o.y0 >= self.y0 && o.y1 <= self.y1
    }
}

/// Where a map may be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Plane,
    /// The torus R²/Z²: inputs are reduced mod 1 and outputs are reported in `[0,1)²`.
    Torus,
    /// A union of closed rectangles in the plane.
    Rects(Vec<Rect>),
}

impl Domain {
    pub fn contains(&self, p: PlanePoint) -> bool {
        match self {
            Domain::Plane | Domain::Torus => p.is_finite(),
            Domain::Rects(rs) => rs.iter().any(|r| r.contains(p)),
        }
    }

    pub fn contains_with_margin(&self, p: PlanePoint, margin: f64) -> bool {
        match self {
            Domain::Plane | Domain::Torus => p.is_finite(),
            Domain::Rects(rs) => rs.iter().any(|r| r.contains_with_margin(p, margin)),
        }
    }

    /// Difference `a - b`, taken modulo Z² on the torus.
    pub fn difference(&self, a: PlanePoint, b: PlanePoint) -> PlanePoint {
        match self {
            Domain::Torus => PlanePoint::new(wrap_centered(a.x - b.x), wrap_centered(a.y - b.y)),
            _ => a - b,
        }
    }

    pub fn distance(&self, a: PlanePoint, b: PlanePoint) -> f64 {
        self.difference(a, b).norm()
    }
}

pub type StepFn = dyn Fn(PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> + Send + Sync;
pub type InverseFn = dyn Fn(PlanePoint) -> Result<PlanePoint, MapError> + Send + Sync;

/// An evaluable planar or toral map with analytic Jacobian.
///
/// Cloning is cheap: the rules are reference counted.
#[derive(Clone)]
pub struct MapDescriptor {
    name: String,
    step: Arc<StepFn>,
    inverse: Option<Arc<InverseFn>>,
    domain: Domain,
    symplectic: bool,
}

impl fmt::Debug for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapDescriptor")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("symplectic", &self.symplectic)
            .field("exact_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl MapDescriptor {
    /// Build a descriptor from a rule returning the image together with the Jacobian.
    pub fn new<F>(name: impl Into<String>, domain: Domain, symplectic: bool, step: F) -> Self
    where
        F: Fn(PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> + Send + Sync + 'static,
    {
        Self { name: name.into(), step: Arc::new(step), inverse: None, domain, symplectic }
    }

    /// Attach an exact inverse rule.
    pub fn with_inverse<G>(mut self, inverse: G) -> Self
    where
        G: Fn(PlanePoint) -> Result<PlanePoint, MapError> + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    pub fn has_exact_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// Image and Jacobian at `p`.
    pub fn step(&self, p: PlanePoint) -> Result<(PlanePoint, Jacobian2), MapError> {
        let p = match self.domain {
            Domain::Torus => p.wrapped(),
            _ => p,
        };
        if !self.domain.contains(p) {
            return Err(MapError::OutOfDomain { map: self.name.clone(), point: p });
        }
        let (q, j) = (self.step)(p)?;
        if !q.is_finite() || !j.is_finite() {
            return Err(MapError::NonFinite { map: self.name.clone(), point: p });
        }
        Ok(match self.domain {
            Domain::Torus => (q.wrapped(), j),
            _ => (q, j),
        })
    }

    pub fn eval(&self, p: PlanePoint) -> Result<PlanePoint, MapError> {
        self.step(p).map(|(q, _)| q)
    }

    pub fn jacobian(&self, p: PlanePoint) -> Result<Jacobian2, MapError> {
        self.step(p).map(|(_, j)| j)
    }

    /// Evaluate the exact inverse rule, if the descriptor has one.
    pub fn exact_inverse(&self, q: PlanePoint) -> Option<Result<PlanePoint, MapError>> {
        self.inverse.as_ref().map(|inv| {
            let q = match self.domain {
                Domain::Torus => q.wrapped(),
                _ => q,
            };
            inv(q).map(|p| match self.domain {
                Domain::Torus => p.wrapped(),
                _ => p,
            })
        })
    }

    /// The inverse map as a descriptor. Requires an exact inverse rule; the
    /// Jacobian is the inverse of the forward Jacobian at the preimage.
    pub fn inverse_map(&self) -> Option<MapDescriptor> {
        let fwd = self.clone();
        let inv = self.inverse.clone()?;
        let domain = match &self.domain {
            Domain::Rects(_) => Domain::Plane,
            d => d.clone(),
        };
        let fwd2 = self.clone();
        let name = format!("{}^-1", self.name);
        let step = move |q: PlanePoint| {
            let p = inv(q)?;
            let j = fwd.jacobian(p)?;
            let ji = j.inverse().ok_or(MapError::SingularJacobian { point: p })?;
            Ok((p, ji))
        };
        Some(MapDescriptor::new(name, domain, self.symplectic, step).with_inverse(move |p| fwd2.eval(p)))
    }
}

/// `f ∘ g`, with the chain-rule Jacobian and composed inverse when both factors have one.
pub fn compose(f: &MapDescriptor, g: &MapDescriptor) -> MapDescriptor {
    let name = format!("{}∘{}", f.name, g.name);
    let (fo, go) = (f.clone(), g.clone());
    let n2 = name.clone();
    let step = move |p: PlanePoint| {
        let (q, jg) = go.step(p)?;
        let q_in = match fo.domain {
            Domain::Torus => q.wrapped(),
            _ => q,
        };
        if !fo.domain.contains(q_in) {
            return Err(MapError::DomainMismatch { map: n2.clone(), point: q });
        }
        let (r, jf) = fo.step(q_in)?;
        Ok((r, jf * jg))
    };
    let out = MapDescriptor::new(name, g.domain.clone(), f.symplectic && g.symplectic, step);
    match (&f.inverse, &g.inverse) {
        (Some(_), Some(_)) => {
            let (fi, gi) = (f.clone(), g.clone());
            out.with_inverse(move |r| {
                let q = fi.exact_inverse(r).expect("checked")?;
                gi.exact_inverse(q).expect("checked")
            })
        }
        _ => out,
    }
}

/// Compose a chain of maps, applied left to right: `chain([a, b, c]) = c∘b∘a`.
pub fn chain(maps: &[MapDescriptor]) -> MapDescriptor {
    let mut it = maps.iter();
    let first = it.next().expect("chain needs at least one map").clone();
    it.fold(first, |acc, m| compose(m, &acc))
}

pub const INVERT_MAX_ITER: usize = 50;
pub const INVERT_TOL: f64 = 1e-12;

/// Solve `f(p) = target` starting from `guess`.
///
/// Uses the exact inverse when available, otherwise damped Newton iteration.
pub fn invert_at(f: &MapDescriptor, target: PlanePoint, guess: PlanePoint) -> Result<PlanePoint, MapError> {
    if let Some(r) = f.exact_inverse(target) {
        return r;
    }
    let tol = INVERT_TOL * (1.0 + target.norm()).min(1e4);
    let mut p = guess;
    let (fp, mut j) = f.step(p)?;
    let mut res = f.domain.difference(fp, target);
    let mut rn = res.norm();
    for _ in 0..INVERT_MAX_ITER {
        if rn <= tol {
            return Ok(p);
        }
        let ji = j.inverse().ok_or(MapError::SingularJacobian { point: p })?;
        let dp = ji.apply(res);
        let mut t = 1.0;
        loop {
            let cand = p - dp * t;
            if let Ok((fc, jc)) = f.step(cand) {
                let rc = f.domain.difference(fc, target);
                if rc.norm() < rn || t < 1e-6 {
                    p = cand;
                    j = jc;
                    res = rc;
                    rn = rc.norm();
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return Err(MapError::NonConvergence { what: format!("inversion of `{}`", f.name), iterations: 0, residual: rn });
            }
        }
    }
    if rn <= tol {
        return Ok(p);
    }
    Err(MapError::NonConvergence { what: format!("inversion of `{}`", f.name), iterations: INVERT_MAX_ITER, residual: rn })
}

/// Default finite-difference step at `p`.
pub fn default_fd_step(p: PlanePoint) -> f64 {
    1e-6 * (1.0 + p.norm())
}

/// Central-difference Jacobian.
pub fn finite_difference_jacobian(f: &MapDescriptor, p: PlanePoint, h: f64) -> Result<Jacobian2, MapError> {
    if !(h > 0.0) {
        return Err(MapError::BoundaryTooClose { point: p, h });
    }
    if !f.domain.contains_with_margin(p, h) {
        return Err(MapError::BoundaryTooClose { point: p, h });
    }
    let d = &f.domain;
    let fxp = f.eval(p + PlanePoint::new(h, 0.0))?;
    let fxm = f.eval(p - PlanePoint::new(h, 0.0))?;
    let fyp = f.eval(p + PlanePoint::new(0.0, h))?;
    let fym = f.eval(p - PlanePoint::new(0.0, h))?;
    let dx = d.difference(fxp, fxm) * (0.5 / h);
    let dy = d.difference(fyp, fym) * (0.5 / h);
    Ok(Jacobian2::from_columns(dx, dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(a: Jacobian2) -> MapDescriptor {
        let ai = a.inverse().unwrap();
        MapDescriptor::new("lin", Domain::Plane, (a.det() - 1.0).abs() < 1e-15, move |p| Ok((a.apply(p), a)))
            .with_inverse(move |q| Ok(ai.apply(q)))
    }

    #[test]
    fn rect_domain_rejects_outside() {
        let f = MapDescriptor::new("id", Domain::Rects(vec![Rect::new(0.0, 1.0, 0.0, 1.0)]), true, |p| {
            Ok((p, Jacobian2::IDENTITY))
        });
        assert!(f.eval(PlanePoint::new(0.5, 0.5)).is_ok());
        assert!(matches!(f.eval(PlanePoint::new(1.5, 0.5)), Err(MapError::OutOfDomain { .. })));
        let shift = MapDescriptor::new("shift", Domain::Plane, true, |p| Ok((p + PlanePoint::new(1.0, 0.0), Jacobian2::IDENTITY)));
        let c = compose(&f, &shift);
        match c.eval(PlanePoint::new(0.5, 0.5)) {
            Err(MapError::DomainMismatch { point, .. }) => assert_eq!(point, PlanePoint::new(1.5, 0.5)),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn newton_inverse_without_exact_rule() {
        let f = MapDescriptor::new("cubic", Domain::Plane, false, |p| {
            Ok((PlanePoint::new(p.x + p.x.powi(3), p.y + 0.5 * p.x * p.x), Jacobian2::new(1.0 + 3.0 * p.x * p.x, 0.0, p.x, 1.0)))
        });
        let target = PlanePoint::new(2.0, 1.0);
        let p = invert_at(&f, target, PlanePoint::ORIGIN).unwrap();
        assert!(f.eval(p).unwrap().dist(target) <= 1e-12);
    }

    #[test]
    fn singular_jacobian_reported() {
        let f = MapDescriptor::new("proj", Domain::Plane, false, |p| Ok((PlanePoint::new(p.x, 0.0), Jacobian2::diag(1.0, 0.0))));
        assert!(matches!(invert_at(&f, PlanePoint::new(1.0, 1.0), PlanePoint::ORIGIN), Err(MapError::SingularJacobian { .. })));
    }

    #[test]
    fn fd_exact_for_linear() {
        let f = linear(Jacobian2::new(2.0, 1.0, 1.0, 1.0));
        for h in [1e-3, 1e-1, 1.0] {
            let j = finite_difference_jacobian(&f, PlanePoint::new(0.3, -0.2), h).unwrap();
            assert!(j.max_abs_diff(&Jacobian2::new(2.0, 1.0, 1.0, 1.0)) < 1e-12);
        }
    }

    #[test]
    fn fd_rejects_boundary() {
        let f = MapDescriptor::new("id", Domain::Rects(vec![Rect::new(0.0, 1.0, 0.0, 1.0)]), true, |p| Ok((p, Jacobian2::IDENTITY)));
        assert!(matches!(
            finite_difference_jacobian(&f, PlanePoint::new(1e-8, 0.5), 1e-6),
            Err(MapError::BoundaryTooClose { .. })
        ));
    }

    #[test]
    fn inverse_map_round_trip() {
        let f = linear(Jacobian2::new(2.0, 1.0, 1.0, 1.0));
        let fi = f.inverse_map().unwrap();
        let p = PlanePoint::new(0.7, -1.3);
        assert!(fi.eval(f.eval(p).unwrap()).unwrap().dist(p) < 1e-14);
        assert!((fi.jacobian(p).unwrap() * f.jacobian(p).unwrap()).max_abs_diff(&Jacobian2::IDENTITY) < 1e-14);
    }
}
