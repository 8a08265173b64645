use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::CliError;

/// How a check compares its value with the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

/// One pass/fail check with the offending value and its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Self::new(name, value <= tol, value, Relation::AtMost, tol)
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value >= bound, value, Relation::AtLeast, bound)
    }

    pub fn equal(name: &str, value: f64, expected: f64) -> Self {
        Self::new(name, value == expected, value, Relation::Equal, expected)
    }

    /// A boolean property, reported as `1 == 1`.
    pub fn holds(name: &str, ok: bool) -> Self {
        Self::new(name, ok, if ok { 1.0 } else { 0.0 }, Relation::Equal, 1.0)
    }

    fn new(name: &str, passed: bool, value: f64, relation: Relation, tolerance: f64) -> Self {
        Self { name: name.to_string(), passed: passed && !value.is_nan(), value, relation, tolerance, detail: None }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Outcome of one `run`, written as `report.json`.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub passed: bool,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, serde_json::Value>,
    /// Paths relative to the output directory.
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl RunReport {
    pub fn new(suite: &str, config: serde_json::Value) -> Self {
        Self {
            suite: suite.into(),
            passed: true,
            config,
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            artifacts: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn metric(&mut self, key: &str, v: impl Serialize) {
        self.metrics.insert(key.into(), serde_json::to_value(v).expect("metric serializes"));
    }

    /// A computation that could not finish: the run fails with the message.
    pub fn error(&mut self, context: &str, e: impl std::fmt::Display) {
        self.passed = false;
        self.errors.push(format!("{context}: {e}"));
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Writes CSV and JSON files into the output directory and records them.
#[derive(Debug)]
pub struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&mut self, name: &str) -> PathBuf {
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.into());
        }
        self.dir.join(name)
    }

    /// Rows of a struct type; the header is the field names.
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let path = self.path(name);
        let io = |e: std::io::Error| CliError::Io { path: path.clone(), source: e };
        let mut w = csv::Writer::from_path(&path).map_err(|e| io(e.into()))?;
        for r in rows {
            w.serialize(r).map_err(|e| io(e.into()))?;
        }
        w.flush().map_err(io)
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let path = self.path(name);
        let mut s = serde_json::to_string_pretty(value).expect("artifact serializes");
        s.push('\n');
        fs::write(&path, s).map_err(|e| CliError::Io { path, source: e })
    }

    /// Plain text outside the determinism contract (timings).
    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::Io { path, source: e })
    }

    pub fn names(&self) -> Vec<String> {
        self.written.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_never_passes() {
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed);
        assert!(Check::at_least("x", 2.0, 1.0).passed);
        let mut r = RunReport::new("s", serde_json::Value::Null);
        r.check(Check::equal("e", 1.0, 2.0));
        assert!(!r.passed && r.failed_checks().count() == 1);
    }

    #[derive(Serialize)]
    struct Row {
        k: usize,
        error: f64,
    }

    #[test]
    fn csv_header_from_fields() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = Artifacts::create(dir.path()).unwrap();
        a.csv("t.csv", &[Row { k: 8, error: 0.5 }]).unwrap();
        let s = fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(s, "k,error\n8,0.5\n");
        assert_eq!(a.names(), vec!["t.csv".to_string()]);
    }
}
