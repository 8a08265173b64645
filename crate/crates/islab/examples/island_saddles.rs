// The blown-up cat map: saddles on each boundary circle, symmetry under
// `−id` and the identity near the centers.

use islab::island::{link_saddles, symmetry_and_identity_report, IslandMap, SurgeryProfile};

/// Returns the number of saddles found on each of the four circles.
pub fn run_example() -> Result<Vec<usize>, islab::island::IslandError> {
    let map = IslandMap::new(SurgeryProfile::new(0.15, 0.24)?)?;
    let e2s = (2.0 * map.sigma()).exp();
    let mut counts = Vec::new();
    for link in 0..4 {
        let s = link_saddles(link, &map)?;
        for sd in &s {
            println!(
                "link {link} saddle {}: theta = {:.6}, eigenvalues {:.6} / {:.6e} (e^(2 sigma) = {e2s:.6})",
                sd.index, sd.theta, sd.unstable_eigenvalue, sd.stable_eigenvalue
            );
        }
        counts.push(s.len());
    }
    let r = symmetry_and_identity_report(&map, 200)?;
    println!("equivariance {:e}, identity {:e}, conjugacy {:e}", r.equivariance_defect, r.identity_defect, r.conjugacy_defect);
    Ok(counts)
}

#[allow(dead_code)]
fn main() {
    run_example().expect("island map builds");
}
