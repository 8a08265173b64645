// Builds the named maps, composes them and checks `det J = 1` against a
// finite-difference Jacobian.

use std::sync::Arc;

use islab::symplectic::maps::{anosov_map, chirikov_map, henon_like, shear_map};
use islab::symplectic::scalar::Polynomial;
use islab::{compose, finite_difference_jacobian, PlanePoint};

/// Returns the worst `|det − 1|` and the worst analytic/finite-difference gap.
pub fn run_example() -> Result<(f64, f64), islab::MapError> {
    let psi = Arc::new(Polynomial::new(vec![0.1, -0.3, 0.2]));
    let maps = [
        anosov_map(),
        chirikov_map(0.7),
        shear_map(psi.clone()),
        henon_like(psi.clone()),
        compose(&henon_like(psi.clone()), &shear_map(psi)),
    ];
    let (mut det, mut fd): (f64, f64) = (0.0, 0.0);
    for f in &maps {
        for k in 0..50 {
            let p = PlanePoint::new(0.013 * k as f64, 0.37 - 0.011 * k as f64);
            let j = f.jacobian(p)?;
            det = det.max((j.det() - 1.0).abs());
            fd = fd.max(j.max_abs_diff(&finite_difference_jacobian(f, p, 1e-6)?));
        }
        println!("{:<24} ok", f.name());
    }
    println!("max |det - 1| = {det:e}, max |J - J_fd| = {fd:e}");
    Ok((det, fd))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("maps evaluate");
}
