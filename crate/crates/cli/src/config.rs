//! Run configuration: JSON in, validated `Config` out.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use taffin_core::relcat::QiInterpretation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    #[serde(default = "default_coeff_order")]
    pub coeff_order: usize,
    /// Natural units: compared exponents lie in `[−mode_window, mode_window]`.
    #[serde(default = "default_mode_window")]
    pub mode_window: u32,
    /// Defaults to `min(mode_window, 2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub serre_window: Option<u32>,
    #[serde(default = "default_basis_degree")]
    pub basis_degree: u32,
    #[serde(default = "default_lattice_height")]
    pub lattice_height: u32,
}

fn default_coeff_order() -> usize {
    20
}
fn default_mode_window() -> u32 {
    3
}
fn default_basis_degree() -> u32 {
    3
}
fn default_lattice_height() -> u32 {
    2
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            coeff_order: default_coeff_order(),
            mode_window: default_mode_window(),
            serre_window: None,
            basis_degree: default_basis_degree(),
            lattice_height: default_lattice_height(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    /// 1-based images of the diagram automorphism.
    pub mu: Vec<usize>,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub qi_interpretation: QiInterpretation,
    #[serde(default, rename = "include_Q9p")]
    pub include_q9p: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Io(String),
    Parse { path: String, message: String },
    Validation { path: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "cannot read config: {m}"),
            ConfigError::Parse { path, message } => write!(f, "parse error at {path}: {message}"),
            ConfigError::Validation { path, message } => {
                write!(f, "invalid value at {path}: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(e.to_string()))?;
        Config::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Config, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Config = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let n = self.cartan.len();
        if n == 0 {
            return Err(invalid("cartan", "empty matrix"));
        }
        for (r, row) in self.cartan.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(
                    format!("cartan[{r}]"),
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
        }
        if self.mu.len() != n {
            return Err(invalid(
                "mu",
                format!("{} images for a {n}x{n} matrix", self.mu.len()),
            ));
        }
        let mut seen = vec![false; n];
        for (k, &m) in self.mu.iter().enumerate() {
            if m == 0 || m > n {
                return Err(invalid(
                    format!("mu[{k}]"),
                    format!("{m} is outside 1..={n}"),
                ));
            }
            if seen[m - 1] {
                return Err(invalid(
                    format!("mu[{k}]"),
                    format!("{m} repeated: not a permutation"),
                ));
            }
            seen[m - 1] = true;
        }
        if self.truncation.mode_window == 0 {
            return Err(invalid("truncation.mode_window", "must be positive"));
        }
        if self.truncation.serre_window == Some(0) {
            return Err(invalid("truncation.serre_window", "must be positive"));
        }
        Ok(())
    }

    pub fn serre_window(&self) -> u32 {
        self.truncation
            .serre_window
            .unwrap_or(self.truncation.mode_window.min(2))
    }

    /// Canonical JSON of the validated config with defaults filled.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = Config::from_json(r#"{"cartan":[[2,-1],[-1,2]],"mu":[2,1]}"#).unwrap();
        assert_eq!(c.truncation, Truncation::default());
        assert_eq!(c.qi_interpretation, QiInterpretation::Q);
        assert!(!c.include_q9p);
        assert_eq!(c.serre_window(), 2);
    }

    #[test]
    fn field_paths_in_errors() {
        let e = Config::from_json(r#"{"cartan":[[2,-1],[-1,2]],"mu":[1,1]}"#).unwrap_err();
        assert_eq!(
            e,
            ConfigError::Validation {
                path: "mu[1]".into(),
                message: "1 repeated: not a permutation".into()
            }
        );
        let e = Config::from_json(r#"{"cartan":[[2,-1],[-1]],"mu":[1,2]}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Validation { ref path, .. } if path == "cartan[1]"));
        let e = Config::from_json(r#"{"cartan":[[2]],"mu":[1],"truncation":{"mode_window":"x"}}"#)
            .unwrap_err();
        assert!(
            matches!(e, ConfigError::Parse { ref path, .. } if path == "truncation.mode_window")
        );
        let e = Config::from_json(r#"{"cartan":[[2]],"mu":[1],"qi_interpretation":"q^2"}"#)
            .unwrap_err();
        assert!(matches!(e, ConfigError::Parse { ref path, .. } if path == "qi_interpretation"));
    }

    #[test]
    fn canonical_form_is_stable() {
        let a = Config::from_json(r#"{"mu":[2,1],"cartan":[[2,-1],[-1,2]]}"#).unwrap();
        let b = Config::from_json(
            r#"{"cartan":[[2,-1],[-1,2]],"mu":[2,1],"truncation":{"coeff_order":20}}"#,
        )
        .unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
    }
}
