// Restores both links of a randomly perturbed two-strip model by the
// fixed-point solvers and measures the remaining manifold gap.

use islab::links::{random_model, restoration_trial, Geometry, SolverOptions};
use rand::SeedableRng;

/// Returns (final residual of the b-stage, largest gap after restoration).
pub fn run_example() -> Result<(f64, f64), islab::links::LinkError> {
    let g = Geometry::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let model = random_model(&mut rng, &g, 1e-3)?;
    let t = restoration_trial(&model, SolverOptions::default(), 32)?;
    for (name, r) in [("a", &t.a), ("b", &t.b)] {
        for row in &r.trace {
            println!("link {name} iter {:>2}: sup {:.3e}  norm0 {:.3e}", row.iter, row.sup_residual, row.norm0_residual);
        }
    }
    println!("gaps after restoration: a {:e}, b {:e}", t.gap_a, t.gap_b);
    Ok((t.b.final_residual, t.gap_a.max(t.gap_b)))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("restoration converges");
}
