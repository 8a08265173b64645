//! Invariants checked on random inputs.

use std::sync::Arc;

use islab::cli::{ExperimentConfig, RawConfig};
use islab::lyapunov::cone_certificate;
use islab::rescaling::r_sequence;
use islab::symplectic::maps::{anosov_map, chirikov_map, henon_like, shear_map};
use islab::symplectic::scalar::Polynomial;
use islab::symplectic::{wrap_centered, wrap_unit};
use islab::{compose, PlanePoint};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..6)
}

proptest! {
    #[test]
    fn shear_and_henon_preserve_area(c in coeffs(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let psi = Arc::new(Polynomial::new(c));
        let p = PlanePoint::new(x, y);
        for f in [shear_map(psi.clone()), henon_like(psi.clone()), compose(&henon_like(psi.clone()), &shear_map(psi.clone()))] {
            let d = f.jacobian(p).unwrap().det();
            prop_assert!((d - 1.0).abs() <= 1e-9 * (1.0 + d.abs()), "{} det {}", f.name(), d);
        }
    }

    #[test]
    fn henon_inverse_round_trips(c in coeffs(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let f = henon_like(Arc::new(Polynomial::new(c)));
        let p = PlanePoint::new(x, y);
        let q = f.eval(p).unwrap();
        let back = f.exact_inverse(q).unwrap().unwrap();
        prop_assert!(back.dist(p) <= 1e-9 * (1.0 + q.norm()));
    }

    #[test]
    fn torus_maps_have_unit_determinant(a in 0.0f64..8.0, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let p = PlanePoint::new(x, y);
        prop_assert!((chirikov_map(a).jacobian(p).unwrap().det() - 1.0).abs() <= 1e-12);
        prop_assert!((anosov_map().jacobian(p).unwrap().det() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn anosov_cone_certificate_everywhere(x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let r = cone_certificate(&anosov_map(), PlanePoint::new(x, y), 20).unwrap();
        prop_assert!(r.holds && r.failed_step.is_none());
    }

    #[test]
    fn wrapping_lands_in_range(v in -1e6f64..1e6) {
        let u = wrap_unit(v);
        prop_assert!((0.0..1.0).contains(&u));
        prop_assert!((u - v).fract().abs() < 1e-6 || (1.0 - (u - v).fract().abs()) < 1e-6);
        let c = wrap_centered(v);
        prop_assert!((-0.5..0.5).contains(&c));
    }

    #[test]
    fn r_sequence_closes_for_odd_n(half in 0usize..5, b in prop::collection::vec(0.2f64..3.0, 11)) {
        let n = 2 * half + 1;
        let b = &b[..n];
        let c: Vec<f64> = b.iter().map(|x| -1.0 / x).collect();
        let r = r_sequence(b, &c).unwrap();
        prop_assert_eq!(r[0], 1.0);
        prop_assert!(r.iter().all(|v| v.is_finite() && *v > 0.0));
    }

    #[test]
    fn r_sequence_rejects_even_n(half in 1usize..5) {
        let b = vec![1.0; 2 * half];
        prop_assert!(r_sequence(&b, &vec![-1.0; 2 * half]).is_err());
    }

    #[test]
    fn config_values_reach_the_echo(n in 1usize..10_000, points in 1usize..500, seed in any::<u64>(), tol in 1e-12f64..1.0) {
        let text = format!(
            "# generated\nsuite = lyapunov\nseed = {seed}\n\nlyapunov.n = {n}   # horizon\nlyapunov.points = \"{points}\"\nlyapunov.tol = {tol:e}\n"
        );
        let raw = RawConfig::parse(&text).unwrap();
        prop_assert_eq!(raw.keys().count(), 5);
        let echo = ExperimentConfig::parse(&text).unwrap().echo();
        prop_assert_eq!(&echo["seed"], &serde_json::json!(seed));
        prop_assert_eq!(&echo["lyapunov"]["n"], &serde_json::json!(n));
        prop_assert_eq!(&echo["lyapunov"]["points"], &serde_json::json!(points));
        prop_assert_eq!(echo["lyapunov"]["tol"].as_f64().unwrap(), tol);
    }

    #[test]
    fn unknown_keys_are_always_reported(key in "[a-z]{3,8}") {
        prop_assume!(!["n", "map", "points", "grid", "tol", "delta", "epsilon"].contains(&key.as_str()));
        let text = format!("suite = lyapunov\nlyapunov.{key}x = 1\n");
        let v = ExperimentConfig::parse(&text).unwrap_err();
        prop_assert!(v.iter().any(|v| v.message == "unknown key" && v.line == Some(2)));
    }
}
