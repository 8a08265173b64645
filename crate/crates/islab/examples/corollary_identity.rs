// Appending a shear to a Hénon product: `S_ψ∘F̂` equals the product with
// two zero functions and `ψ` appended.

use islab::rescaling::{corollary_composition, disc_grid};
use islab::symplectic::scalar::Polynomial;

/// Returns the sup defect of the identity on the unit disc.
pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let prefix = vec![Polynomial::new(vec![0.05, 0.0, -0.1]), Polynomial::new(vec![0.0, 0.08, 0.02])];
    let psi = Polynomial::new(vec![0.01, -0.04, 0.1]);
    let pair = corollary_composition(&prefix, &psi)?;
    let d = pair.defect(&disc_grid(500))?;
    println!("sup |S_psi o F_hat - product| = {d:e}");
    Ok(d)
}

#[allow(dead_code)]
fn main() {
    run_example().expect("composition builds");
}
