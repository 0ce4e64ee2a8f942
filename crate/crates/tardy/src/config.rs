//! Cost-model calibration file.
//!
//! ```toml
//! [cost_model]
//! lawler_moore = 1.0
//! sumset = 1.0
//! conv = 0.5
//! ```
//!
//! Missing keys keep their default of 1.0.

use std::path::Path;

use serde::Deserialize;
use tardy_core::sched::CostModel;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    cost_model: Constants,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Constants {
    lawler_moore: f64,
    sumset: f64,
    conv: f64,
}

impl Default for Constants {
    fn default() -> Self {
        let c = CostModel::default();
        Constants {
            lawler_moore: c.lawler_moore,
            sumset: c.sumset,
            conv: c.conv,
        }
    }
}

/// Bad calibration file.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// Unreadable file.
    #[error("cannot read {path}: {source}")]
    Io {
        /// The file.
        path: String,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Not valid TOML for this schema.
    #[error("invalid cost model: {0}")]
    Toml(#[from] toml::de::Error),
    /// A constant that is not a positive finite number.
    #[error("cost constant `{0}` must be positive and finite")]
    NotPositive(&'static str),
}

/// Parses calibration constants from TOML text.
pub fn parse_cost_model(text: &str) -> Result<CostModel, ConfigError> {
    let file: File = toml::from_str(text)?;
    let c = file.cost_model;
    for (name, v) in [("lawler_moore", c.lawler_moore), ("sumset", c.sumset), ("conv", c.conv)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(ConfigError::NotPositive(name));
        }
    }
    Ok(CostModel {
        lawler_moore: c.lawler_moore,
        sumset: c.sumset,
        conv: c.conv,
    })
}

/// Reads calibration constants from a TOML file.
pub fn load_cost_model(path: &Path) -> Result<CostModel, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_cost_model(&text)
}
