//! `debtscope.conf`: the TOML project configuration.
//!
//! ```toml
//! project_id = 1
//! rules = "debt-rules.toml"
//!
//! [scan]
//! exclude = [".git", ".debtscope", "vendor"]
//!
//! [clones]
//! min_tokens = 100
//! min_lines = 5
//! mode = "ident-blind"
//!
//! [cost_model]
//! hourly_rate = 50.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clones::CloneSettings;
use crate::debt::CostModel;
use crate::ingest::ScanConfig;
use crate::rules::{load_rule_file, RuleSet};
use crate::{Error, Result};

pub const CONFIG_FILE: &str = "debtscope.conf";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Prefix of TD item ids.
    pub project_id: u32,
    /// Rule manifest, relative to the config file.
    pub rules: Option<PathBuf>,
    pub scan: ScanConfig,
    pub clones: CloneSettings,
    pub cost_model: CostModel,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            project_id: 1,
            rules: None,
            scan: ScanConfig::default(),
            clones: CloneSettings::default(),
            cost_model: CostModel::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.clones.validate()?;
        config.cost_model.validate()?;
        Ok(config)
    }

    /// `explicit` must exist; otherwise `<root>/debtscope.conf` is used when
    /// present, else the defaults. Relative paths inside resolve against the
    /// file's directory.
    pub fn load(root: &Path, explicit: Option<&Path>) -> Result<Self> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => {
                let p = root.join(CONFIG_FILE);
                if !p.is_file() {
                    return Ok(Config::default());
                }
                p
            }
        };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut config = Config::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let (Some(rules), Some(dir)) = (&config.rules, path.parent()) {
            if rules.is_relative() {
                config.rules = Some(dir.join(rules));
            }
        }
        Ok(config)
    }

    /// The builtin catalog plus the configured manifest, if any.
    pub fn rule_set(&self) -> Result<RuleSet> {
        match &self.rules {
            Some(path) => load_rule_file(path),
            None => Ok(RuleSet::builtin()),
        }
    }
}
