use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::SolverConfig;
use crate::experiments::{PerturbationKind, PerturbationSpec, DEFAULT_SPECTRAL_DECAY};
use crate::spectral::GridSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKindName {
    RandomSmooth,
    SingleMode,
    ShellTangent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub kind: PerturbationKindName,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    /// Wavenumber for `single_mode`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<[i64; 2]>,
}

fn default_decay() -> f64 {
    DEFAULT_SPECTRAL_DECAY
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_workers() -> usize {
    1
}

/// Everything a `simulate` or `sweep` run needs. Serializes back to a valid
/// config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub solver: SolverConfig,
    pub theta: f64,
    pub perturbation: PerturbationConfig,
    /// Epsilon values for `sweep`; ignored by `simulate`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl RunConfig {
    pub fn from_json(text: &str, path: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        cfg.validate().map_err(|message| ConfigError::Invalid { path: path.to_string(), message })?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: shown.clone(), source })?;
        Self::from_json(&text, &shown)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), String> {
        GridSpec::new(self.n).map_err(|e| format!("n: {e}"))?;
        self.solver.validate().map_err(|e| format!("solver: {e}"))?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.theta) {
            return Err(format!("theta {} outside [0, π/2]", self.theta));
        }
        let p = &self.perturbation;
        if !(p.epsilon >= 0.0 && p.epsilon.is_finite()) {
            return Err(format!("perturbation.epsilon {} must be >= 0", p.epsilon));
        }
        if !(p.decay >= 0.0 && p.decay.is_finite()) {
            return Err(format!("perturbation.decay {} must be >= 0", p.decay));
        }
        match (p.kind, p.mode) {
            (PerturbationKindName::SingleMode, None) => {
                return Err("perturbation.mode is required for single_mode".into());
            }
            (PerturbationKindName::SingleMode, Some([0, 0])) => {
                return Err("perturbation.mode (0,0) is the mean".into());
            }
            (PerturbationKindName::SingleMode, _) => {}
            (_, Some(_)) => return Err("perturbation.mode only applies to single_mode".into()),
            _ => {}
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(format!("epsilons: {e} must be positive"));
        }
        if self.workers == 0 {
            return Err("workers must be >= 1".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.n).expect("validated")
    }

    pub fn perturbation_spec(&self) -> PerturbationSpec {
        let p = &self.perturbation;
        let kind = match p.kind {
            PerturbationKindName::RandomSmooth => PerturbationKind::RandomSmooth,
            PerturbationKindName::SingleMode => PerturbationKind::SingleMode(p.mode.unwrap_or([1, 1])),
            PerturbationKindName::ShellTangent => PerturbationKind::ShellTangent,
        };
        PerturbationSpec { kind, seed: p.seed, epsilon: p.epsilon, spectral_decay: p.decay }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
  "n": 32,
  "solver": { "dt": 0.01, "t_final": 1.0 },
  "theta": 0.5235987755982988,
  "perturbation": { "kind": "random_smooth", "seed": 3, "epsilon": 0.01 }
}"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = RunConfig::from_json(GOOD, "good.json").unwrap();
        assert_eq!(cfg.solver.observer_stride, 10);
        assert_eq!(cfg.solver.cfl_safety, 0.5);
        assert_eq!(cfg.perturbation.decay, 4.0);
        assert_eq!(cfg.workers, 1);
        // the echo is itself a valid config
        assert_eq!(RunConfig::from_json(&cfg.to_json(), "echo").unwrap(), cfg);
    }

    #[test]
    fn unknown_key_is_line_anchored() {
        let text = GOOD.replace("\"theta\"", "\"thetta\"");
        let err = RunConfig::from_json(&text, "bad.json").unwrap_err();
        match &err {
            ConfigError::Parse { line, .. } => assert_eq!(*line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().starts_with("bad.json:4:"));
    }

    #[test]
    fn malformed_json() {
        let err = RunConfig::from_json("{\n  \"n\": 32,\n  oops\n}", "m.json").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 3, .. }));
    }

    #[test]
    fn range_checks() {
        for (from, to) in [
            ("\"n\": 32", "\"n\": 31"),
            ("\"dt\": 0.01", "\"dt\": -0.01"),
            ("\"theta\": 0.5235987755982988", "\"theta\": 2.0"),
            ("\"epsilon\": 0.01", "\"epsilon\": -1"),
            ("\"kind\": \"random_smooth\"", "\"kind\": \"single_mode\""),
        ] {
            let err = RunConfig::from_json(&GOOD.replace(from, to), "x.json").unwrap_err();
            assert!(matches!(err, ConfigError::Invalid { .. }), "{from} -> {to}: {err}");
        }
    }
}
