//! The `islab` binary: exit codes, overrides and artifact layout.

use std::path::Path;
use std::process::Command;

fn islab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_islab"))
}

fn write_cfg(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("exp.cfg");
    std::fs::write(&p, body).unwrap();
    p
}

const LIGHT: &str = "suite = lyapunov\nlyapunov.n = 40\nlyapunov.points = 12\nlyapunov.grid = 8\n";

#[test]
fn run_passes_and_writes_report() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(d.path(), LIGHT);
    let out = d.path().join("out");
    let o = islab().arg("run").arg(&cfg).arg("--out").arg(&out).args(["--seed", "9", "--threads", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS exponent_error"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["config"]["lyapunov"]["n"], 40);
    for a in report["artifacts"].as_array().unwrap() {
        let a = a.as_str().unwrap();
        assert!(!a.starts_with('/'), "{a}");
        assert!(out.join(a).is_file(), "{a}");
    }
    assert!(out.join("timing.txt").is_file());
}

#[test]
fn failed_check_exits_one() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(d.path(), &format!("{LIGHT}lyapunov.tol = 1e-30\nlyapunov.n = 3\n").replace("lyapunov.n = 40\n", ""));
    let o = islab().arg("run").arg(&cfg).arg("--out").arg(d.path().join("o")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(d.path(), "suite = lyapunov\nlyapunov.bogus = 1\nlyapunov.n = -4\n");
    let o = islab().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lyapunov.bogus") && err.contains("unknown key"), "{err}");
    assert!(err.contains("lyapunov.n"), "{err}");

    let o = islab().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = islab().args(["run", "/nonexistent/exp.cfg"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = islab().args(["run"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = islab().arg("run").arg(&cfg).args(["--threads", "0"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn even_leg_count_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(d.path(), "suite = rescaling\nrescaling.n_legs = 2\n");
    let o = islab().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for e in std::fs::read_dir(&dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "cfg") {
            let o = islab().arg("validate").arg(&p).output().unwrap();
            assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), String::from_utf8_lossy(&o.stderr));
            n += 1;
        }
    }
    assert_eq!(n, 5);
}
