// Finite-time exponent of the cat map `[[13, 8], [8, 5]]` against its
// closed form `ln(9 + 4√5)`.

use islab::lyapunov::{max_lyapunov, stability_probe};
use islab::symplectic::maps::{anosov_exponent, anosov_map};
use islab::PlanePoint;

/// Returns `|λ_50 − σ|` at one point.
pub fn run_example() -> Result<f64, islab::lyapunov::LyapunovError> {
    let f = anosov_map();
    let p = PlanePoint::new(0.31, 0.72);
    let s = max_lyapunov(&f, p, 50)?;
    let (a, b, gap) = stability_probe(&f, p, 50)?;
    println!("lambda_50 = {:.12}, sigma = {:.12}", s.lambda, anosov_exponent());
    println!("lambda_50 = {a:.12}, lambda_100 = {b:.12}, probe = {gap:e}");
    Ok((s.lambda - anosov_exponent()).abs())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("orbit stays on the torus");
}
