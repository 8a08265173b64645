// Grid estimate of the entropy integral on the stochastic island.

use islab::island::{IslandMap, SurgeryProfile};
use islab::lyapunov::{entropy_estimate_excluding, GridSpec};
use islab::PlanePoint;

/// Returns (fraction of island cells with `λ ≥ ln 4`, Pesin estimate).
pub fn run_example() -> Result<(f64, f64), Box<dyn std::error::Error>> {
    let map = IslandMap::new(SurgeryProfile::default())?;
    let m = map.clone();
    let hole = move |p: PlanePoint| m.in_hole(p, 0.0);
    let r = entropy_estimate_excluding(&map.descriptor(), GridSpec::torus(40)?, 100, &hole)?;
    let delta = map.profile().delta;
    let bound = 4f64.ln() * (1.0 - 4.0 * std::f64::consts::PI * delta * delta);
    println!("island cells: {}, fraction >= ln 4: {:.4}", r.valid_cells, r.fraction_above);
    println!("estimate {:.4} vs ln 4 * island area {:.4}", r.estimate, bound);
    Ok((r.fraction_above, r.estimate))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("grid sweep runs");
}
