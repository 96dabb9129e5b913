//! Run configuration files and command-line overrides.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::solver::{BcSection, RunConfig};

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text)?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Flag values that replace config keys when present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dim: Option<u32>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub cells: Option<usize>,
    pub t_end: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &RunConfig) -> Result<RunConfig> {
        let mut c = config.clone();
        if let Some(d) = self.dim {
            c.system.dim = d;
        }
        if self.alpha.is_some() || self.beta.is_some() {
            c.bc = BcSection {
                alpha: self.alpha.unwrap_or(c.bc.alpha),
                beta: self.beta.unwrap_or(c.bc.beta),
            };
        }
        if let Some(e) = self.epsilon {
            c.data.epsilon = e;
        }
        if let Some(n) = self.cells {
            c.grid.cells = n;
        }
        if let Some(t) = self.t_end {
            c.time.t_end = t;
        }
        c.validate()?;
        Ok(c)
    }
}

/// SHA-256 of the canonical TOML rendering.
pub fn config_hash(config: &RunConfig) -> String {
    let text = toml::to_string(config).unwrap_or_default();
    hex::encode(Sha256::digest(text.as_bytes()))
}
