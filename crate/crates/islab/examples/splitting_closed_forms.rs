// Splitting functions of the two links at the normal form compared with
// their closed forms, and one contraction factor of the b-solver.

use islab::links::{closed_form_defect, contraction_factor, random_trig, Geometry, Side};
use rand::SeedableRng;

/// Returns (defect of `M^a`, defect of `M^b`, contraction factor).
pub fn run_example() -> Result<(f64, f64, f64), islab::links::LinkError> {
    let g = Geometry::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let pa = random_trig(&mut rng, &g, Side::A, 8, 1e-2, false);
    let pb = random_trig(&mut rng, &g, Side::B, 8, 1e-2, false);
    let d = closed_form_defect(&g, &pa, &pb)?;
    let q = random_trig(&mut rng, &g, Side::B, 8, 1e-2, true);
    let c = contraction_factor(&g, &q)?;
    println!("sup |M^a - cf| = {:e}, sup |M^b - cf| = {:e}, contraction = {c:.4}", d.a, d.b);
    Ok((d.a, d.b, c))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("splitting evaluates");
}
