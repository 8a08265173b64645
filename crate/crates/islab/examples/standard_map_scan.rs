// Mean finite-time exponent of the standard map for a few parameters.

use islab::lyapunov::{entropy_estimate, GridSpec};
use islab::symplectic::maps::chirikov_map;

/// Returns `(a, mean λ)` pairs.
pub fn run_example() -> Result<Vec<(f64, f64)>, islab::lyapunov::LyapunovError> {
    let grid = GridSpec::torus(12)?;
    let mut out = Vec::new();
    for a in [0.1, 0.5, 1.0, 2.0, 4.0] {
        let r = entropy_estimate(&chirikov_map(a), grid, 150)?;
        println!("a = {a:<4} mean lambda = {:.4}  entropy = {:.4}", r.mean_lambda(), r.estimate);
        out.push((a, r.mean_lambda()));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    run_example().expect("scan runs");
}
