//! Every example compiles as a module here and its `run_example` result is
//! checked.

macro_rules! example {
    ($m:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $m {
            include!($file);
        }
    };
}

example!(symplectic_maps, "../examples/symplectic_maps.rs");
example!(anosov_exponent, "../examples/anosov_exponent.rs");
example!(cone_certificate, "../examples/cone_certificate.rs");
example!(island_saddles, "../examples/island_saddles.rs");
example!(island_entropy, "../examples/island_entropy.rs");
example!(standard_map_scan, "../examples/standard_map_scan.rs");
example!(splitting_closed_forms, "../examples/splitting_closed_forms.rs");
example!(restore_links, "../examples/restore_links.rs");
example!(rescaling_error, "../examples/rescaling_error.rs");
example!(corollary_identity, "../examples/corollary_identity.rs");
example!(run_config, "../examples/run_config.rs");
example!(hamiltonian_flow, "../examples/hamiltonian_flow.rs");

#[test]
fn symplectic_maps_example() {
    let (det, fd) = symplectic_maps::run_example().unwrap();
    assert!(det <= 1e-12 && fd <= 1e-6, "{det:e} {fd:e}");
}

#[test]
fn anosov_exponent_example() {
    assert!(anosov_exponent::run_example().unwrap() <= 1e-6);
}

#[test]
fn cone_certificate_example() {
    assert_eq!(cone_certificate::run_example().unwrap(), (true, Some(1)));
}

#[test]
fn island_saddles_example() {
    assert_eq!(island_saddles::run_example().unwrap(), vec![4; 4]);
}

#[test]
fn island_entropy_example() {
    let (fraction, estimate) = island_entropy::run_example().unwrap();
    assert!(fraction >= 0.95);
    assert!(estimate >= 4f64.ln() * (1.0 - 4.0 * std::f64::consts::PI * 0.0225) - 0.05);
}

#[test]
fn standard_map_scan_example() {
    let v = standard_map_scan::run_example().unwrap();
    assert_eq!(v.len(), 5);
    // Strong kicking is chaotic almost everywhere: λ ≈ ln(2πa/2) for large a.
    assert!(v[4].1 > 2.0, "{v:?}");
    assert!(v[0].1 < v[4].1);
}

#[test]
fn splitting_closed_forms_example() {
    let (a, b, c) = splitting_closed_forms::run_example().unwrap();
    assert!(a <= 1e-6 && b <= 1e-6 && c <= 0.6);
}

#[test]
fn restore_links_example() {
    let (res, gap) = restore_links::run_example().unwrap();
    assert!(res <= 1e-8 && gap <= 1e-7, "{res:e} {gap:e}");
}

#[test]
fn rescaling_error_example() {
    let e = rescaling_error::run_example().unwrap();
    assert!(e.windows(2).all(|w| w[1] < w[0]) && e[3] <= 0.05, "{e:?}");
}

#[test]
fn corollary_identity_example() {
    assert!(corollary_identity::run_example().unwrap() <= 1e-10);
}

#[test]
fn run_config_example() {
    assert_eq!(run_config::run_example().unwrap(), 0);
}

#[test]
fn hamiltonian_flow_example() {
    let (drift, det) = hamiltonian_flow::run_example().unwrap();
    assert!(drift <= 1e-8 && det <= 1e-12, "{drift:e} {det:e}");
}
