use crate::symplectic::{MapDescriptor, PlanePoint, SaddleData};

use super::curve::GraphCurve;
use super::LinkError;

/// Which invariant manifold to grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Unstable,
    Stable,
}

/// A grown arc of an invariant manifold.
#[derive(Clone, Debug)]
pub struct ManifoldArc {
    /// Points ordered away from the saddle.
    pub points: Vec<PlanePoint>,
    /// `max dist(f(p), arc)` over the arc points whose image stays on it.
    pub invariance_defect: f64,
}

impl ManifoldArc {
    /// Read the arc as a graph over x on `[x0, x1]`.
    pub fn to_graph(&self, x0: f64, x1: f64, n: usize) -> Result<GraphCurve, LinkError> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        for w in pts.windows(2) {
            if w[1].x <= w[0].x {
                return Err(LinkError::Transversality { x: w[0].x });
            }
        }
        let interp = |x: f64| -> Result<f64, LinkError> {
            let j = pts.partition_point(|p| p.x < x);
            if j == 0 || j == pts.len() {
                return Err(LinkError::OutsideCurve { x, lo: pts[0].x, hi: pts[pts.len() - 1].x });
            }
            let (a, b) = (pts[j - 1], pts[j]);
            Ok(a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x))
        };
        let h = (x1 - x0) / (n - 1) as f64;
        let v = (0..n).map(|k| interp(x0 + h * k as f64)).collect::<Result<Vec<_>, _>>()?;
        GraphCurve::from_samples(x0, x1, v)
    }
}

fn dist_to_polyline(p: PlanePoint, pts: &[PlanePoint]) -> f64 {
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let d = b - a;
            let t = ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
            p.dist(a + d * t)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Grow one branch of the manifold of `saddle` by iterating a fundamental
/// segment seeded on the eigendirection at distance `seed` (one side).
///
/// Stable branches are grown with the inverse of `f`.
pub fn manifold_grow(
    f: &MapDescriptor,
    saddle: &SaddleData,
    branch: Branch,
    seed: f64,
    arclength: f64,
    per_segment: usize,
) -> Result<ManifoldArc, LinkError> {
    let (dir, lambda, map) = match branch {
        Branch::Unstable => (saddle.unstable_direction, saddle.unstable_eigenvalue, f.clone()),
        Branch::Stable => (
            saddle.stable_direction,
            1.0 / saddle.stable_eigenvalue,
            f.inverse_map().ok_or_else(|| LinkError::Geometry("stable branch needs an exact inverse".into()))?,
        ),
    };
    let lam = lambda.abs();
    if !(lam > 1.0) {
        return Err(LinkError::Geometry("saddle is not hyperbolic".into()));
    }
    // Fundamental segment [s, λ s] on the eigenline, logarithmically spaced.
    let mut seg: Vec<PlanePoint> = (0..per_segment)
        .map(|k| {
            let t = seed * lam.powf(k as f64 / per_segment as f64);
            saddle.point + dir * t
        })
        .collect();
    let mut points = seg.clone();
    let mut length = 0.0;
    while length < arclength {
        let next = seg.iter().map(|&p| map.eval(p)).collect::<Result<Vec<_>, _>>()?;
        for &p in &next {
            length += p.dist(*points.last().expect("non-empty"));
            points.push(p);
        }
        seg = next;
        if points.len() > 1_000_000 {
            return Err(LinkError::Geometry("manifold growth did not reach the requested length".into()));
        }
    }
    // Invariance: images of all but the last segment must lie on the arc.
    let mut defect: f64 = 0.0;
    for &p in &points[..points.len() - per_segment] {
        defect = defect.max(dist_to_polyline(map.eval(p)?, &points));
    }
    Ok(ManifoldArc { points, invariance_defect: defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::maps::linear_map;
    use crate::symplectic::Jacobian2;

    #[test]
    fn linear_saddle_unstable_manifold_is_axis() {
        let f = linear_map("diag", Jacobian2::diag(2.0, 0.5));
        let s = SaddleData::from_jacobian(PlanePoint::new(0.0, 0.0), f.jacobian(PlanePoint::new(0.0, 0.0)).unwrap()).unwrap();
        let arc = manifold_grow(&f, &s, Branch::Unstable, 1e-3, 2.0, 16).unwrap();
        assert!(arc.points.iter().all(|p| p.y == 0.0));
        assert!(arc.invariance_defect < 1e-15);
        let st = manifold_grow(&f, &s, Branch::Stable, 1e-3, 1.0, 16).unwrap();
        assert!(st.points.iter().all(|p| p.x == 0.0));
    }
}
