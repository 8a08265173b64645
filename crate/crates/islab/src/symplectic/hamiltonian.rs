use super::{Domain, Jacobian2, MapDescriptor, MapError, PlanePoint};
use std::fmt;
use std::sync::Arc;

type Field<T> = Arc<dyn Fn(f64, f64) -> T + Send + Sync>;

/// Which canonical pair the two coordinates form.
///
/// Cartesian `(x, y)`: `ẋ = ∂H/∂y`, `ẏ = −∂H/∂x`.
/// Polar `(ρ, θ)` with `ω = dρ∧dθ`: `ρ̇ = ∂H/∂θ`, `θ̇ = −∂H/∂ρ`.
/// Points of a polar system are stored as `PlanePoint { x: ρ, y: θ }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinates {
    Cartesian,
    Polar,
}

/// Order of the composed implicit-midpoint scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegratorOrder {
    /// Plain implicit midpoint.
    Second,
    /// Triple-jump composition of the midpoint rule.
    Fourth,
    /// Triple jump applied twice.
    Sixth,
}

impl IntegratorOrder {
    /// Sub-step fractions of one macro step.
    fn weights(self) -> Vec<f64> {
        fn jump(inner: &[f64], p: f64) -> Vec<f64> {
            let c = 2f64.powf(1.0 / (p + 1.0));
            let w1 = 1.0 / (2.0 - c);
            let w0 = -c * w1;
            let mut out = Vec::new();
            for w in [w1, w0, w1] {
                out.extend(inner.iter().map(|x| x * w));
            }
            out
        }
        match self {
            IntegratorOrder::Second => vec![1.0],
            IntegratorOrder::Fourth => jump(&[1.0], 2.0),
            IntegratorOrder::Sixth => jump(&jump(&[1.0], 2.0), 4.0),
        }
    }
}

/// A one-degree-of-freedom Hamiltonian with gradient and Hessian.
#[derive(Clone)]
pub struct HamiltonianSystem {
    h: Field<f64>,
    grad: Field<[f64; 2]>,
    hess: Field<[[f64; 2]; 2]>,
    coords: Coordinates,
    steps: usize,
    order: IntegratorOrder,
}

impl fmt::Debug for HamiltonianSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSystem")
            .field("coords", &self.coords)
            .field("steps", &self.steps)
            .field("order", &self.order)
            .finish()
    }
}

const FIXED_POINT_TOL: f64 = 1e-15;
const FIXED_POINT_ITERS: usize = 12;
const NEWTON_ITERS: usize = 25;

impl HamiltonianSystem {
    /// Defaults: 64 steps of the plain midpoint rule.
    pub fn new<H, G, K>(h: H, grad: G, hess: K, coords: Coordinates) -> Self
    where
        H: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
        K: Fn(f64, f64) -> [[f64; 2]; 2] + Send + Sync + 'static,
    {
        Self { h: Arc::new(h), grad: Arc::new(grad), hess: Arc::new(hess), coords, steps: 64, order: IntegratorOrder::Second }
    }

    /// Build from `H` and its gradient; the Hessian is a central difference of the gradient.
    pub fn with_fd_hessian<H, G>(h: H, grad: G, coords: Coordinates) -> Self
    where
        H: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static + Clone,
    {
        let g2 = grad.clone();
        let hess = move |a: f64, b: f64| {
            let ha = 1e-6 * (1.0 + a.abs());
            let hb = 1e-6 * (1.0 + b.abs());
            let (ap, am) = (g2(a + ha, b), g2(a - ha, b));
            let (bp, bm) = (g2(a, b + hb), g2(a, b - hb));
            let haa = (ap[0] - am[0]) / (2.0 * ha);
            let hbb = (bp[1] - bm[1]) / (2.0 * hb);
            let hab = 0.5 * ((ap[1] - am[1]) / (2.0 * ha) + (bp[0] - bm[0]) / (2.0 * hb));
            [[haa, hab], [hab, hbb]]
        };
        Self::new(h, grad, hess, coords)
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_order(mut self, order: IntegratorOrder) -> Self {
        self.order = order;
        self
    }

    pub fn coordinates(&self) -> Coordinates {
        self.coords
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn order(&self) -> IntegratorOrder {
        self.order
    }

    pub fn energy(&self, z: PlanePoint) -> f64 {
        (self.h)(z.x, z.y)
    }

    pub fn gradient(&self, z: PlanePoint) -> [f64; 2] {
        (self.grad)(z.x, z.y)
    }

    /// Vector field and its derivative at `z`.
    pub fn vector_field(&self, z: PlanePoint) -> (PlanePoint, Jacobian2) {
        let g = (self.grad)(z.x, z.y);
        let k = (self.hess)(z.x, z.y);
        (
            PlanePoint::new(g[1], -g[0]),
            Jacobian2::new(k[0][1], k[1][1], -k[0][0], -k[1][0]),
        )
    }

    fn midpoint_step(&self, z0: PlanePoint, h: f64) -> Result<(PlanePoint, Jacobian2), MapError> {
        let tol = FIXED_POINT_TOL * (1.0 + z0.norm());
        let (f0, _) = self.vector_field(z0);
        let mut z1 = z0 + f0 * h;
        let mut converged = false;
        for _ in 0..FIXED_POINT_ITERS {
            let (f, _) = self.vector_field((z0 + z1) * 0.5);
            let next = z0 + f * h;
            let d = next.dist(z1);
            z1 = next;
            if d <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            z1 = z0 + f0 * h;
            let mut res = f64::INFINITY;
            for _ in 0..NEWTON_ITERS {
                let (f, df) = self.vector_field((z0 + z1) * 0.5);
                let g = z1 - z0 - f * h;
                res = g.norm();
                if res <= tol {
                    converged = true;
                    break;
                }
                let dg = Jacobian2::IDENTITY.sub(&df.scale(0.5 * h));
                let inv = dg.inverse().ok_or(MapError::SingularJacobian { point: z1 })?;
                z1 = z1 - inv.apply(g);
            }
            if !converged {
                return Err(MapError::NonConvergence { what: "implicit midpoint solve".into(), iterations: NEWTON_ITERS, residual: res });
            }
        }
        let (_, df) = self.vector_field((z0 + z1) * 0.5);
        let lhs = Jacobian2::IDENTITY.sub(&df.scale(0.5 * h));
        let rhs = Jacobian2::IDENTITY.add(&df.scale(0.5 * h));
        let inv = lhs.inverse().ok_or(MapError::SingularJacobian { point: z1 })?;
        Ok((z1, inv * rhs))
    }

    /// Time-`t` flow of `z` with its Jacobian.
    pub fn flow(&self, z: PlanePoint, t: f64) -> Result<(PlanePoint, Jacobian2), MapError> {
        let n = self.steps.max(1);
        let h = t / n as f64;
        let w = self.order.weights();
        let mut z = z;
        let mut j = Jacobian2::IDENTITY;
        for _ in 0..n {
            for &wi in &w {
                let (z1, dj) = self.midpoint_step(z, wi * h)?;
                z = z1;
                j = dj * j;
            }
        }
        Ok((z, j))
    }
}

/// The time-`t` map of `sys` as a descriptor; its exact inverse is the time-`(−t)` map.
pub fn hamiltonian_time_map(sys: &HamiltonianSystem, t: f64) -> MapDescriptor {
    let fwd = sys.clone();
    let bwd = sys.clone();
    MapDescriptor::new(format!("flow_{t}"), Domain::Plane, true, move |p| fwd.flow(p, t))
        .with_inverse(move |q| bwd.flow(q, -t).map(|(p, _)| p))
}
