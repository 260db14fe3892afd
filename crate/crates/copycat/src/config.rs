//! Run configuration files.
//!
//! ```json
//! { "version": 1, "train": { "gbt": { "rounds": 200 } }, "copy": { "runs": 10 } }
//! ```
//!
//! Every section is optional and missing fields take their defaults. Unknown
//! keys are rejected at any depth. Command-line flags override file values.

use std::path::Path;

use copycat_core::copier::CopyConfig;
use copycat_core::data::SplitConfig;
use copycat_core::models::TrainConfig;
use copycat_core::sampler::SamplerConfig;
use copycat_core::scenarios::credit::CreditGenConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub copy: CopyConfig,
    #[serde(default)]
    pub credit: CreditGenConfig,
    #[serde(default)]
    pub split: SplitConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            train: TrainConfig::default(),
            sampler: SamplerConfig::default(),
            copy: CopyConfig::default(),
            credit: CreditGenConfig::default(),
            split: SplitConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if cfg.version != CONFIG_VERSION {
            return Err(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                cfg.version
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::parse(&text).map_err(|msg| Error::Config(format!("{}: {msg}", path.display())))
    }

    /// The file at `path`, or defaults without one.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_are_optional() {
        let cfg = RunConfig::parse(r#"{"version": 1, "copy": {"runs": 3}}"#).unwrap();
        assert_eq!(cfg.copy.runs, 3);
        assert_eq!(cfg.copy.n_train, CopyConfig::default().n_train);
        assert_eq!(cfg.train, TrainConfig::default());
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = RunConfig::parse(r#"{"version": 1, "bogus": 2}"#).unwrap_err();
        assert!(err.contains("bogus"), "{err}");
        let err = RunConfig::parse(r#"{"version": 1, "train": {"gbt": {"depth": 2}}}"#).unwrap_err();
        assert!(err.contains("depth"), "{err}");
    }

    #[test]
    fn version_is_required_and_checked() {
        assert!(RunConfig::parse("{}").unwrap_err().contains("version"));
        assert!(RunConfig::parse(r#"{"version": 2}"#).unwrap_err().contains("version 2"));
    }
}
