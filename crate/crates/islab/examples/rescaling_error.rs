// Distance between the renormalised iterate and the Hénon product as the
// number of saddle passages grows.

use islab::rescaling::{disc_grid, random_quadratics, verify_rescaling, RescalingModel};
use rand::SeedableRng;

/// Returns `E(k)` for `k = 8, 10, 12, 14` in the nonlinear configuration.
pub fn run_example() -> Result<Vec<f64>, islab::rescaling::RescalingError> {
    let psis = random_quadratics(&mut rand_chacha::ChaCha8Rng::seed_from_u64(2), 3, 0.1);
    let grid = disc_grid(300);
    let mut out = Vec::new();
    for (name, m) in [("affine", RescalingModel::affine_default()), ("nonlinear", RescalingModel::nonlinear_default())] {
        let rep = verify_rescaling(&m, &[8, 10, 12, 14], &psis, &grid)?;
        for r in &rep.rows {
            println!("{name:<9} k = {:>2}  n = {:>2}  E = {:.3e}  phi = {:.3e}", r.k, r.n, r.error, r.phi_defect);
        }
        if name == "nonlinear" {
            out = rep.rows.iter().map(|r| r.error).collect();
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    run_example().expect("legs stay in their windows");
}
