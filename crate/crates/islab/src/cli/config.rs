//! `key = value` experiment configs with dotted sections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::island::{IslandMap, SurgeryProfile};
use crate::links::Geometry;
use crate::rescaling::{
    RescalingModel, SaddleNormalForm, TransitionTails, DEFAULT_KAPPA, DEFAULT_X_PLUS, DEFAULT_Y_MINUS,
};

/// One problem found in a config.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(l), Some(k)) => write!(f, "line {l}: {k}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(k)) => write!(f, "{k}: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed but untyped config: a map of dotted keys to raw values.
#[derive(Clone, Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.split('.').all(|part| {
            !part.is_empty() && part.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
        })
}

impl RawConfig {
    /// Parse config text. Syntax errors and duplicate keys are all reported.
    pub fn parse(text: &str) -> Result<Self, Vec<Violation>> {
        let mut entries = BTreeMap::new();
        let mut errors = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                errors.push(Violation { key: None, line: Some(line), message: format!("expected `key = value`, got `{body}`") });
                continue;
            };
            let (k, mut v) = (k.trim(), v.trim());
            if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
                v = &v[1..v.len() - 1];
            }
            if !valid_key(k) {
                errors.push(Violation { key: Some(k.into()), line: Some(line), message: "malformed key".into() });
                continue;
            }
            if v.is_empty() {
                errors.push(Violation { key: Some(k.into()), line: Some(line), message: "missing value".into() });
                continue;
            }
            if let Some(prev) = entries.insert(k.to_string(), Entry { value: v.to_string(), line }) {
                errors.push(Violation {
                    key: Some(k.into()),
                    line: Some(line),
                    message: format!("duplicate key (first set on line {})", prev.line),
                });
            }
        }
        if errors.is_empty() {
            Ok(Self { entries })
        } else {
            Err(errors)
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|k| k.as_str())
    }
}

/// The five suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Island,
    Lyapunov,
    StdmapScan,
    Links,
    Rescaling,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Island, Suite::Lyapunov, Suite::StdmapScan, Suite::Links, Suite::Rescaling];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Island => "island",
            Suite::Lyapunov => "lyapunov",
            Suite::StdmapScan => "stdmap-scan",
            Suite::Links => "links",
            Suite::Rescaling => "rescaling",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Typed config cursor. Every read marks the key as used and records
/// range violations instead of failing.
struct Reader<'a> {
    raw: &'a RawConfig,
    prefix: &'static str,
    used: BTreeSet<String>,
    violations: Vec<Violation>,
}

impl<'a> Reader<'a> {
    fn new(raw: &'a RawConfig) -> Self {
        Self { raw, prefix: "", used: BTreeSet::new(), violations: Vec::new() }
    }

    fn full(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.prefix)
        }
    }

    fn fail(&mut self, key: &str, message: impl Into<String>) {
        let full = self.full(key);
        let line = self.raw.entries.get(&full).map(|e| e.line);
        self.violations.push(Violation { key: Some(full), line, message: message.into() });
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let full = self.full(key);
        let v = self.raw.get(&full).map(str::to_string);
        self.used.insert(full);
        v
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str, default: T, what: &str) -> T {
        match self.take(key) {
            None => default,
            Some(s) => match s.parse() {
                Ok(v) => v,
                Err(_) => {
                    self.fail(key, format!("expected {what}, got `{s}`"));
                    default
                }
            },
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> f64 {
        let v = self.parsed(key, default, "a number");
        if !v.is_finite() {
            self.fail(key, "must be finite");
        }
        v
    }

    fn positive(&mut self, key: &str, default: f64) -> f64 {
        let v = self.f64(key, default);
        if !(v > 0.0) {
            self.fail(key, format!("must be > 0, got {v}"));
        }
        v
    }

    fn fraction(&mut self, key: &str, default: f64) -> f64 {
        let v = self.f64(key, default);
        if !(0.0..=1.0).contains(&v) {
            self.fail(key, format!("must lie in [0, 1], got {v}"));
        }
        v
    }

    fn count(&mut self, key: &str, default: usize, min: usize) -> usize {
        let v = self.parsed(key, default, "a non-negative integer");
        if v < min {
            self.fail(key, format!("must be at least {min}, got {v}"));
        }
        v
    }

    fn flag(&mut self, key: &str, default: bool) -> bool {
        self.parsed(key, default, "true or false")
    }

    fn list<T: std::str::FromStr + Clone>(&mut self, key: &str, default: &[T], what: &str) -> Vec<T> {
        let Some(s) = self.take(key) else { return default.to_vec() };
        let items: Result<Vec<T>, _> = s.split(',').map(|t| t.trim()).filter(|t| !t.is_empty()).map(str::parse).collect();
        match items {
            Ok(v) => v,
            Err(_) => {
                self.fail(key, format!("expected a comma-separated list of {what}, got `{s}`"));
                default.to_vec()
            }
        }
    }

    fn floats(&mut self, key: &str, default: &[f64]) -> Vec<f64> {
        let v = self.list(key, default, "numbers");
        if v.iter().any(|x| !x.is_finite()) {
            self.fail(key, "entries must be finite");
        }
        v
    }

    fn choice(&mut self, key: &str, default: &str, options: &[&str]) -> String {
        let v = self.take(key).unwrap_or_else(|| default.to_string());
        if !options.contains(&v.as_str()) {
            self.fail(key, format!("expected one of {}, got `{v}`", options.join(", ")));
        }
        v
    }
}

/// Island suite: symmetry, identity, saddles, exponents and entropy of `F̂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IslandParams {
    pub delta: f64,
    pub epsilon: f64,
    pub rho0: f64,
    pub flow_steps: usize,
    pub samples: usize,
    pub grid: usize,
    pub horizon: usize,
    pub symmetry_tol: f64,
    pub identity_tol: f64,
    pub eigen_tol: f64,
    pub det_tol: f64,
    pub det_samples: usize,
    pub min_fraction: f64,
    pub entropy_slack: f64,
}

impl IslandParams {
    fn read(r: &mut Reader) -> Self {
        let delta = r.positive("delta", 0.15);
        let epsilon = r.positive("epsilon", 0.24);
        let p = Self {
            delta,
            epsilon,
            rho0: r.positive("rho0", delta * delta / 4.0),
            flow_steps: r.count("flow_steps", IslandMap::DEFAULT_FLOW_STEPS, 1),
            samples: r.count("samples", 1000, 1),
            grid: r.count("grid", 100, 8),
            horizon: r.count("horizon", 200, 1),
            symmetry_tol: r.positive("symmetry_tol", 1e-9),
            identity_tol: r.positive("identity_tol", 1e-12),
            eigen_tol: r.positive("eigen_tol", 1e-4),
            det_tol: r.positive("det_tol", 1e-8),
            det_samples: r.count("det_samples", 10_000, 1),
            min_fraction: r.fraction("min_fraction", 0.95),
            entropy_slack: r.f64("entropy_slack", 0.05),
        };
        if let Err(e) = p.profile() {
            r.fail("delta", e.to_string());
        }
        p
    }

    pub fn profile(&self) -> Result<SurgeryProfile, crate::island::IslandError> {
        SurgeryProfile::new(self.delta, self.epsilon)?.with_rho0(self.rho0)
    }
}

/// Map analysed by the lyapunov suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentMap {
    Anosov,
    Identity,
    Chirikov,
    Island,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovParams {
    pub map: ExponentMap,
    pub n: usize,
    pub points: usize,
    pub grid: usize,
    pub tol: f64,
    pub cone_steps: usize,
    pub chirikov_a: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub min_fraction: f64,
    pub entropy_slack: f64,
}

impl LyapunovParams {
    fn read(r: &mut Reader) -> Self {
        let map = match r.choice("map", "anosov", &["anosov", "identity", "chirikov", "island"]).as_str() {
            "identity" => ExponentMap::Identity,
            "chirikov" => ExponentMap::Chirikov,
            "island" => ExponentMap::Island,
            _ => ExponentMap::Anosov,
        };
        let p = Self {
            map,
            n: r.count("n", 200, 1),
            points: r.count("points", 100, 1),
            grid: r.count("grid", 32, 8),
            tol: r.positive("tol", 1e-6),
            cone_steps: r.count("cone_steps", 50, 1),
            chirikov_a: r.f64("chirikov_a", 1.0),
            delta: r.positive("delta", 0.15),
            epsilon: r.positive("epsilon", 0.24),
            min_fraction: r.fraction("min_fraction", 0.95),
            entropy_slack: r.f64("entropy_slack", 0.05),
        };
        if map == ExponentMap::Island {
            if let Err(e) = SurgeryProfile::new(p.delta, p.epsilon) {
                r.fail("delta", e.to_string());
            }
        }
        p
    }
}

/// Descriptive sweep of the standard map over its parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanParams {
    pub a_min: f64,
    pub a_max: f64,
    pub a_step: f64,
    pub n: usize,
    pub grid: usize,
}

impl ScanParams {
    fn read(r: &mut Reader) -> Self {
        let p = Self {
            a_min: r.f64("a_min", 0.1),
            a_max: r.f64("a_max", 6.0),
            a_step: r.positive("a_step", 0.1),
            n: r.count("n", 200, 1),
            grid: r.count("grid", 16, 8),
        };
        if p.a_max < p.a_min {
            r.fail("a_max", "must be ≥ a_min");
        } else if p.a_step > 0.0 && (p.a_max - p.a_min) / p.a_step > 1e5 {
            r.fail("a_step", "too many parameter values (more than 1e5)");
        }
        p
    }

    /// `a_min, a_min + step, …` up to `a_max` (inclusive up to rounding).
    pub fn values(&self) -> Vec<f64> {
        let m = ((self.a_max - self.a_min) / self.a_step + 1e-9).floor() as usize;
        (0..=m).map(|i| self.a_min + i as f64 * self.a_step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinksParams {
    pub geometry: Geometry,
    pub closed_form_trials: usize,
    pub harmonics: usize,
    pub amplitude: f64,
    pub closed_form_tol: f64,
    pub contraction_trials: usize,
    pub contraction_max: f64,
    pub mean_trials: usize,
    pub mean_tol: f64,
    pub perturbations: usize,
    pub size: f64,
    pub max_iter: usize,
    pub solver_tol: f64,
    pub residual_tol: f64,
    pub curve_tol: f64,
    pub gap_points: usize,
}

impl LinksParams {
    fn read(r: &mut Reader) -> Self {
        let d = Geometry::default();
        let geometry = Geometry {
            tau: r.f64("tau", d.tau),
            x_a: r.f64("x_a", d.x_a),
            x_b: r.f64("x_b", d.x_b),
            y1: r.f64("y1", d.y1),
            y2: r.f64("y2", d.y2),
            delta: r.f64("delta", d.delta),
            band: r.f64("band", d.band),
        };
        if let Err(e) = geometry.validate() {
            r.fail("tau", e.to_string());
        }
        Self {
            geometry,
            closed_form_trials: r.count("closed_form_trials", 20, 0),
            harmonics: r.count("harmonics", 8, 1),
            amplitude: r.positive("amplitude", 1e-2),
            closed_form_tol: r.positive("closed_form_tol", 1e-6),
            contraction_trials: r.count("contraction_trials", 20, 0),
            contraction_max: r.positive("contraction_max", 0.6),
            mean_trials: r.count("mean_trials", 10, 0),
            mean_tol: r.positive("mean_tol", 1e-8),
            perturbations: r.count("perturbations", 10, 1),
            size: r.positive("size", 1e-3),
            max_iter: r.count("max_iter", 30, 1),
            solver_tol: r.positive("solver_tol", 1e-10),
            residual_tol: r.positive("residual_tol", 1e-8),
            curve_tol: r.positive("curve_tol", 1e-7),
            gap_points: r.count("gap_points", 64, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescalingParams {
    pub lambda: f64,
    pub mu: f64,
    pub r: u32,
    pub n_legs: usize,
    pub k_values: Vec<usize>,
    pub box_delta: f64,
    pub t0_coeffs: Vec<f64>,
    pub x_plus: Vec<f64>,
    pub y_minus: Vec<f64>,
    pub kappa: f64,
    pub beta2: Vec<f64>,
    pub beta3: Vec<f64>,
    pub g2: Vec<f64>,
    pub g3: Vec<f64>,
    pub psi_sets: usize,
    pub psi_amplitude: f64,
    pub grid_points: usize,
    pub affine_check: bool,
    pub affine_tol: f64,
    pub error_max: f64,
    pub phi_tol: f64,
    pub corollary_prefix: usize,
    pub corollary_points: usize,
    pub corollary_tol: f64,
}

impl RescalingParams {
    fn read(r: &mut Reader) -> Self {
        let p = Self {
            lambda: r.f64("lambda", 0.4),
            mu: r.f64("mu", 0.8),
            r: r.parsed("r", 2, "a positive integer"),
            n_legs: r.count("n_legs", 3, 1),
            k_values: r.list("k_values", &[8, 10, 12, 14], "integers"),
            box_delta: r.positive("box_delta", 0.005),
            t0_coeffs: r.floats("t0_coeffs", &[0.2, 0.1]),
            x_plus: r.floats("x_plus", &DEFAULT_X_PLUS),
            y_minus: r.floats("y_minus", &DEFAULT_Y_MINUS),
            kappa: r.positive("kappa", DEFAULT_KAPPA),
            beta2: r.floats("beta2", &[0.2, -0.15, 0.1]),
            beta3: r.floats("beta3", &[-0.1, 0.1, 0.05]),
            g2: r.floats("g2", &[0.1, -0.08, 0.12]),
            g3: r.floats("g3", &[0.02, 0.03, -0.02]),
            psi_sets: r.count("psi_sets", 5, 1),
            psi_amplitude: r.positive("psi_amplitude", 0.1),
            grid_points: r.count("grid_points", 1000, 1),
            affine_check: r.flag("affine_check", true),
            affine_tol: r.positive("affine_tol", 1e-9),
            error_max: r.positive("error_max", 0.05),
            phi_tol: r.positive("phi_tol", 1e-9),
            corollary_prefix: r.count("corollary_prefix", 2, 0),
            corollary_points: r.count("corollary_points", 1000, 1),
            corollary_tol: r.positive("corollary_tol", 1e-10),
        };
        if p.n_legs % 2 == 0 {
            r.fail("n_legs", format!("N = {} is even; the rescaled product closes only when N is odd", p.n_legs));
        }
        if p.r == 0 {
            r.fail("r", "must be at least 1");
        }
        if !(p.lambda.abs() < p.mu.powi(p.r as i32) && p.mu.powi(p.r as i32) < 1.0) {
            r.fail("lambda", format!("need |λ| < μ^r < 1, got λ = {}, μ^r = {}", p.lambda, p.mu.powi(p.r as i32)));
        }
        for (key, len) in [
            ("x_plus", p.x_plus.len()),
            ("y_minus", p.y_minus.len()),
            ("beta2", p.beta2.len()),
            ("beta3", p.beta3.len()),
            ("g2", p.g2.len()),
            ("g3", p.g3.len()),
        ] {
            if len != p.n_legs {
                r.fail(key, format!("needs {} entries (one per leg), got {len}", p.n_legs));
            }
        }
        if p.k_values.is_empty() || p.k_values.iter().any(|&k| k == 0) {
            r.fail("k_values", "needs at least one k, all ≥ 1");
        }
        if p.corollary_prefix % 2 == 1 {
            r.fail("corollary_prefix", "must be even");
        }
        if r.violations.is_empty() {
            if let Err(e) = p.model().and_then(|_| p.affine_model()) {
                r.fail("x_plus", e.to_string());
            } else if let Ok(m) = p.model() {
                for &k in &p.k_values {
                    if let Err(e) = m.chart(k).and_then(|c| {
                        crate::rescaling::build_perturbation(&c, &vec![crate::symplectic::scalar::Polynomial::new(vec![0.0]); m.len()], p.box_delta)
                    }) {
                        r.fail("k_values", format!("k = {k}: {e}"));
                    }
                }
            }
        }
        p
    }

    fn tails(&self) -> Vec<TransitionTails> {
        (0..self.n_legs)
            .map(|i| TransitionTails { beta2: self.beta2[i], beta3: self.beta3[i], g2: self.g2[i], g3: self.g3[i] })
            .collect()
    }

    /// The configured model.
    pub fn model(&self) -> Result<RescalingModel, crate::rescaling::RescalingError> {
        let t0 = SaddleNormalForm::new(self.lambda, self.t0_coeffs.clone())?;
        let consts = RescalingModel::constants_from(&self.x_plus, &self.y_minus, self.kappa);
        RescalingModel::new(t0, &consts, &self.tails(), self.mu, self.r, self.box_delta)
    }

    /// Same constants with a linear saddle and affine transitions.
    pub fn affine_model(&self) -> Result<RescalingModel, crate::rescaling::RescalingError> {
        let t0 = SaddleNormalForm::linear(self.lambda)?;
        let consts = RescalingModel::constants_from(&self.x_plus, &self.y_minus, self.kappa);
        RescalingModel::new(t0, &consts, &vec![TransitionTails::default(); self.n_legs], self.mu, self.r, self.box_delta)
    }

    pub fn is_affine(&self) -> bool {
        self.t0_coeffs.iter().all(|&c| c == 0.0) && self.tails().iter().all(|t| t.is_zero())
    }
}

/// Suite-specific parameter block.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SuiteParams {
    Island(IslandParams),
    Lyapunov(LyapunovParams),
    StdmapScan(ScanParams),
    Links(LinksParams),
    Rescaling(RescalingParams),
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub params: SuiteParams,
}

impl ExperimentConfig {
    /// Resolve a raw config; returns every violation found.
    pub fn from_raw(raw: &RawConfig) -> Result<Self, Vec<Violation>> {
        let mut r = Reader::new(raw);
        let suite_name = r.take("suite");
        let seed = r.parsed("seed", 0u64, "an unsigned integer");
        let output_dir = r.take("output.dir").map(PathBuf::from);
        let suite = match suite_name.as_deref().map(|s| (s, Suite::parse(s))) {
            None => {
                r.violations.push(Violation { key: Some("suite".into()), line: None, message: "missing".into() });
                None
            }
            Some((s, None)) => {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                r.fail("suite", format!("unknown suite `{s}`; expected one of {}", names.join(", ")));
                None
            }
            Some((_, Some(x))) => Some(x),
        };
        let params = suite.map(|s| {
            r.prefix = s.name();
            let p = match s {
                Suite::Island => SuiteParams::Island(IslandParams::read(&mut r)),
                Suite::Lyapunov => SuiteParams::Lyapunov(LyapunovParams::read(&mut r)),
                Suite::StdmapScan => SuiteParams::StdmapScan(ScanParams::read(&mut r)),
                Suite::Links => SuiteParams::Links(LinksParams::read(&mut r)),
                Suite::Rescaling => SuiteParams::Rescaling(RescalingParams::read(&mut r)),
            };
            r.prefix = "";
            p
        });
        for k in raw.keys() {
            if !r.used.contains(k) {
                let line = raw.entries.get(k).map(|e| e.line);
                r.violations.push(Violation { key: Some(k.to_string()), line, message: "unknown key".into() });
            }
        }
        match (suite, params) {
            (Some(suite), Some(params)) if r.violations.is_empty() => Ok(Self { suite, seed, output_dir, params }),
            _ => Err(r.violations),
        }
    }

    pub fn parse(text: &str) -> Result<Self, Vec<Violation>> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    /// The resolved parameters as JSON, `output.dir` excluded so that
    /// reports do not depend on where they are written.
    pub fn echo(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert("suite".into(), self.suite.name().into());
        m.insert("seed".into(), self.seed.into());
        m.insert(self.suite.name().into(), serde_json::to_value(&self.params).expect("params serialize"));
        serde_json::Value::Object(m)
    }
}

/// Violations of a config file; empty iff `run` would accept it.
pub fn validate(text: &str) -> Vec<Violation> {
    ExperimentConfig::parse(text).err().unwrap_or_default()
}

/// Read and resolve a config file. I/O failures are reported as a single
/// violation naming the path.
pub fn load(path: &Path) -> Result<ExperimentConfig, Vec<Violation>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Violation { key: None, line: None, message: format!("cannot read {}: {e}", path.display()) }]
    })?;
    ExperimentConfig::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn messages(text: &str) -> Vec<String> {
        validate(text).into_iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn parses_comments_and_sections() {
        let c = ExperimentConfig::parse("# demo\nsuite = island  # trailing\nseed = 7\nisland.delta = 0.12\n\n").unwrap();
        assert_eq!(c.suite, Suite::Island);
        assert_eq!(c.seed, 7);
        let SuiteParams::Island(p) = c.params else { panic!() };
        assert_eq!(p.delta, 0.12);
        assert_eq!(p.rho0, 0.12 * 0.12 / 4.0);
    }

    #[test]
    fn rejects_unknown_and_foreign_keys() {
        let m = messages("suite = island\nisland.dleta = 0.1\nlinks.tau = 1\n");
        assert_eq!(m.len(), 2, "{m:?}");
        assert!(m.iter().all(|s| s.contains("unknown key")));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let v = RawConfig::parse("suite = island\nnot a pair\nseed = 1\nseed = 2\n").unwrap_err();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].line, Some(2));
        assert!(v[1].message.contains("duplicate"));
    }

    #[test]
    fn radius_order_violation() {
        let m = messages("suite = island\nisland.delta = 0.2\nisland.epsilon = 0.15\n");
        assert!(m.iter().any(|s| s.contains("inner radius must be < outer")), "{m:?}");
    }

    #[test]
    fn even_n_and_lamu_violations() {
        let m = messages(
            "suite = rescaling\nrescaling.n_legs = 4\nrescaling.x_plus = 0.004,0.026,0.015,0.04\n\
             rescaling.y_minus = 0.3,0.32,0.34,0.36\nrescaling.beta2 = 0,0,0,0\nrescaling.beta3 = 0,0,0,0\n\
             rescaling.g2 = 0,0,0,0\nrescaling.g3 = 0,0,0,0\n",
        );
        assert!(m.iter().any(|s| s.contains("odd")), "{m:?}");
        let m = messages("suite = rescaling\nrescaling.lambda = 0.7\n");
        assert!(m.iter().any(|s| s.contains("μ^r")), "{m:?}");
    }

    #[test]
    fn defaults_are_valid_for_every_suite() {
        for s in Suite::ALL {
            assert!(validate(&format!("suite = {}\n", s.name())).is_empty(), "{}", s.name());
        }
        assert!(!validate("seed = 3\n").is_empty());
        assert!(!validate("suite = nope\n").is_empty());
    }

    #[test]
    fn scan_values_are_inclusive() {
        let p = ScanParams { a_min: 0.1, a_max: 6.0, a_step: 0.1, n: 10, grid: 8 };
        let v = p.values();
        assert_eq!(v.len(), 60);
        assert!((v[59] - 6.0).abs() < 1e-12);
    }
}
