// Time map of a pendulum Hamiltonian by the symplectic integrator: energy
// drift and determinant of the propagated Jacobian.

use islab::symplectic::{hamiltonian_time_map, Coordinates, HamiltonianSystem, IntegratorOrder};
use islab::PlanePoint;

/// Returns (energy drift after 50 periods of the map, `|det − 1|`).
pub fn run_example() -> Result<(f64, f64), islab::MapError> {
    let sys = HamiltonianSystem::new(
        |x, y| 0.5 * y * y - x.cos(),
        |x, y| [x.sin(), y],
        |x, _| [[x.cos(), 0.0], [0.0, 1.0]],
        Coordinates::Cartesian,
    )
    .with_steps(32)
    .with_order(IntegratorOrder::Sixth);
    let f = hamiltonian_time_map(&sys, 1.0);
    let mut p = PlanePoint::new(0.5, 0.2);
    let e0 = sys.energy(p);
    let mut det: f64 = 0.0;
    for _ in 0..50 {
        let (q, j) = f.step(p)?;
        det = det.max((j.det() - 1.0).abs());
        p = q;
    }
    let drift = (sys.energy(p) - e0).abs();
    println!("energy drift {drift:e}, max |det - 1| {det:e}");
    Ok((drift, det))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("flow integrates");
}
