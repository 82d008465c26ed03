//! Optional TOML configuration. Command-line flags take precedence, then the
//! file, then `HEUNKIT_SEED`, then built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::VerifyError;

pub const SEED_ENV: &str = "HEUNKIT_SEED";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub draws: Option<usize>,
    pub tol: Option<f64>,
    pub suite: Option<String>,
    pub report: Option<PathBuf>,
    pub param_bound: Option<f64>,
    pub x_fraction: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, VerifyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VerifyError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, VerifyError> {
        toml::from_str(text).map_err(|e| VerifyError::Config(e.to_string()))
    }
}

/// Seed from the environment, if set.
pub fn env_seed() -> Result<Option<u64>, VerifyError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| VerifyError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = FileConfig::parse("seed = 5\ndraws = 3\ntol = 1e-8\nsuite = \"gauss\"\nx_fraction = 0.1\n").unwrap();
        assert_eq!(c.seed, Some(5));
        assert_eq!(c.draws, Some(3));
        assert_eq!(c.suite.as_deref(), Some("gauss"));
        assert_eq!(c.report, None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_types() {
        assert!(FileConfig::parse("seeds = 5").is_err());
        assert!(FileConfig::parse("seed = \"five\"").is_err());
        assert_eq!(FileConfig::parse("").unwrap(), FileConfig::default());
    }
}
