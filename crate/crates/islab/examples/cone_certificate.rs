// The positive quadrant is mapped into itself with fourfold growth by the
// cat map, but not by a quarter turn.

use islab::lyapunov::cone_certificate;
use islab::symplectic::maps::{anosov_map, rotation};
use islab::PlanePoint;

/// Returns (holds for the cat map, failing step of the rotation).
pub fn run_example() -> Result<(bool, Option<usize>), islab::lyapunov::LyapunovError> {
    let p = PlanePoint::new(0.2, 0.9);
    let cat = cone_certificate(&anosov_map(), p, 30)?;
    let rot = cone_certificate(&rotation(std::f64::consts::FRAC_PI_2), p, 30)?;
    println!("cat map: holds = {}, min log growth = {:.4}", cat.holds, cat.growth_log.iter().copied().fold(f64::INFINITY, f64::min));
    println!("rotation: holds = {}, failed at step {:?}", rot.holds, rot.failed_step);
    Ok((cat.holds, rot.failed_step))
}

#[allow(dead_code)]
fn main() {
    run_example().expect("derivatives evaluate");
}
