//! Config ingestion, suite orchestration and report emission behind the
//! `islab` binary.
//!
//! ```text
//! islab run <config-file> [--out DIR] [--seed U64] [--threads N]
//! islab validate <config-file>
//! ```
//!
//! Exit status: [`EXIT_PASS`] when every check passes, [`EXIT_FAIL`] when a
//! numeric check fails, [`EXIT_CONFIG`] for invalid configs and I/O errors.

mod config;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use config::{
    load, validate, ExperimentConfig, ExponentMap, IslandParams, LinksParams, LyapunovParams, RawConfig,
    RescalingParams, ScanParams, Suite, SuiteParams, Violation,
};
pub use report::{Artifacts, Check, Relation, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Output directory used when neither `--out` nor `output.dir` is given.
pub const DEFAULT_OUT_DIR: &str = "islab-out";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config:\n{}", .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    Config(Vec<Violation>),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

/// Command-line overrides of a config.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

/// A finished run: the report and where it was written.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Execute a resolved config and write its artifacts plus `report.json`.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let mut config = config.clone();
    if let Some(s) = opts.seed {
        config.seed = s;
    }
    let out_dir = opts.out.clone().or_else(|| config.output_dir.clone()).unwrap_or_else(|| DEFAULT_OUT_DIR.into());
    let work = || run_in(&config, &out_dir);
    let report = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Pool(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    Ok(RunOutcome { report, out_dir })
}

fn run_in(config: &ExperimentConfig, dir: &Path) -> Result<RunReport, CliError> {
    let mut out = Artifacts::create(dir)?;
    let mut report = RunReport::new(config.suite.name(), config.echo());
    let t0 = Instant::now();
    match &config.params {
        SuiteParams::Island(p) => suites::island(p, &mut report, &mut out)?,
        SuiteParams::Lyapunov(p) => suites::lyapunov(p, config.seed, &mut report, &mut out)?,
        SuiteParams::StdmapScan(p) => suites::stdmap_scan(p, &mut report, &mut out)?,
        SuiteParams::Links(p) => suites::links(p, config.seed, &mut report, &mut out)?,
        SuiteParams::Rescaling(p) => suites::rescaling(p, config.seed, &mut report, &mut out)?,
    }
    // Wall-clock stays out of the JSON so reports are reproducible.
    out.text("timing.txt", &format!("suite {}\nwall_clock_seconds {:.3}\n", config.suite.name(), t0.elapsed().as_secs_f64()))?;
    report.artifacts = out.names();
    report.artifacts.push("report.json".into());
    out.json("report.json", &report)?;
    Ok(report)
}

/// Load, validate and run a config file.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let config = load(path).map_err(CliError::Config)?;
    run(&config, opts)
}

/// Human-readable summary of a report, one line per check.
pub fn summary(outcome: &RunOutcome) -> String {
    let r = &outcome.report;
    let mut s = String::new();
    for c in &r.checks {
        let rel = match c.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equal => "==",
        };
        s += &format!("{} {} = {:e} ({rel} {:e})\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    for e in &r.errors {
        s += &format!("ERROR {e}\n");
    }
    s += &format!(
        "{} suite {}: artifacts in {}\n",
        if r.passed { "PASS" } else { "FAIL" },
        r.suite,
        outcome.out_dir.display()
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyapunov_anosov_passes_and_is_reproducible() {
        let cfg = ExperimentConfig::parse("suite = lyapunov\nlyapunov.n = 50\nlyapunov.points = 10\nlyapunov.grid = 8\n").unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ra = run(&cfg, &RunOptions { out: Some(a.path().into()), seed: Some(5), threads: Some(1) }).unwrap();
        let rb = run(&cfg, &RunOptions { out: Some(b.path().into()), seed: Some(5), threads: Some(2) }).unwrap();
        assert_eq!(ra.exit_code(), EXIT_PASS, "{}", summary(&ra));
        for name in &ra.report.artifacts {
            let x = std::fs::read(a.path().join(name)).unwrap();
            let y = std::fs::read(b.path().join(name)).unwrap();
            assert_eq!(x, y, "{name}");
        }
        let field = std::fs::read_to_string(a.path().join("lambda_field.csv")).unwrap();
        assert!(field.starts_with("x,y,lambda,valid\n"));
        assert_eq!(rb.report.config["seed"], 5);
    }

    #[test]
    fn failing_check_gives_exit_one() {
        let cfg = ExperimentConfig::parse("suite = lyapunov\nlyapunov.n = 5\nlyapunov.points = 3\nlyapunov.grid = 8\nlyapunov.tol = 1e-15\n").unwrap();
        let d = tempfile::tempdir().unwrap();
        let r = run(&cfg, &RunOptions { out: Some(d.path().into()), ..Default::default() }).unwrap();
        assert_eq!(r.exit_code(), EXIT_FAIL);
        assert!(r.report.failed_checks().all(|c| c.value > c.tolerance));
    }

    #[test]
    fn unreadable_config_is_a_config_error() {
        let e = run_file(Path::new("/nonexistent/islab.cfg"), &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG);
    }
}
