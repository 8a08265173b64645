// Runs a suite from config text, as the `islab` binary does.

use islab::cli::{run, summary, ExperimentConfig, RunOptions};

const CONFIG: &str = "
# cat-map exponents on a coarse grid
suite = lyapunov
lyapunov.map = anosov
lyapunov.n = 50
lyapunov.points = 20
lyapunov.grid = 16
";

/// Returns the exit code the binary would use.
pub fn run_example() -> Result<i32, Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(CONFIG).map_err(|v| format!("{v:?}"))?;
    let dir = std::env::temp_dir().join(format!("islab-example-{}", std::process::id()));
    let out = run(&cfg, &RunOptions { out: Some(dir.clone()), seed: Some(1), threads: None })?;
    print!("{}", summary(&out));
    std::fs::remove_dir_all(&dir)?;
    Ok(out.exit_code())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("suite runs");
}
