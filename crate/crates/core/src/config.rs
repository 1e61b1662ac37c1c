//! Flat `key = value` run configuration with optional `[command]` sections.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::spectral::SpectralCase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("config line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("invalid value for {key}: {reason}")]
    Value { key: String, reason: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
}

/// Parsed file: section name (empty for the top level) to key/value pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut file = ConfigFile::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: &str| ConfigError::Syntax {
                line: i + 1,
                reason: reason.into(),
            };
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| syntax("unterminated section header"))?;
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected key = value"))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(syntax("empty key"));
            }
            file.sections
                .entry(section.clone())
                .or_default()
                .insert(k.to_string(), v.trim().to_string());
        }
        Ok(file)
    }

    /// Top-level values, then values of the command's section.
    pub fn values_for(&self, command: &str) -> Vec<(&str, &str)> {
        [String::new(), command.to_string()]
            .iter()
            .filter_map(|s| self.sections.get(s))
            .flat_map(|m| m.iter().map(|(k, v)| (k.as_str(), v.as_str())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub out: Option<PathBuf>,
    pub format: String,
    pub seed: u64,
    pub max_degree: usize,
    pub case: SpectralCase,
    pub ledger: Option<PathBuf>,
    pub embedding: String,
    pub curve: String,
    pub starts: usize,
    pub tol: f64,
    pub distinct_margin: f64,
}

pub const MAX_DEGREE_RANGE: (usize, usize) = (4, 12);

impl RunConfig {
    pub fn defaults(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            out: None,
            format: "text".into(),
            seed: 42,
            max_degree: 10,
            case: SpectralCase::SphereZ,
            ledger: None,
            embedding: "ellipsoid:1.0,1.3,0.7".into(),
            curve: "ellipse:1.0,0.6".into(),
            starts: 16,
            tol: 1e-16,
            distinct_margin: 1e-3,
        }
    }

    pub fn apply_file(&mut self, file: &ConfigFile) -> Result<(), ConfigError> {
        for (k, v) in file.values_for(&self.command.clone()) {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
            v.parse().map_err(|_| ConfigError::Value {
                key: key.into(),
                reason: format!("cannot parse {v:?}"),
            })
        }
        let bad = |reason: String| ConfigError::Value {
            key: key.into(),
            reason,
        };
        match key.replace('_', "-").as_str() {
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                if !["text", "json", "ascii", "csv"].contains(&value) {
                    return Err(bad(format!("{value:?} is not one of text|json|ascii|csv")));
                }
                self.format = value.into();
            }
            "seed" => self.seed = parse(key, value)?,
            "max-degree" => {
                let d: usize = parse(key, value)?;
                let (lo, hi) = MAX_DEGREE_RANGE;
                if !(lo..=hi).contains(&d) {
                    return Err(bad(format!("{d} outside {lo}..={hi}")));
                }
                self.max_degree = d;
            }
            "case" => {
                self.case = value
                    .parse()
                    .map_err(|e: crate::spectral::SpectralError| bad(e.to_string()))?
            }
            "ledger" => self.ledger = Some(PathBuf::from(value)),
            "embedding" => self.embedding = value.into(),
            "curve" => self.curve = value.into(),
            "starts" => {
                let s: usize = parse(key, value)?;
                if s == 0 {
                    return Err(bad("at least one start is required".into()));
                }
                self.starts = s;
            }
            "tol" => {
                let t: f64 = parse(key, value)?;
                if !(t > 0.0) {
                    return Err(bad("must be positive".into()));
                }
                self.tol = t;
            }
            "distinct-margin" => {
                let m: f64 = parse(key, value)?;
                if !(m > 0.0) {
                    return Err(bad("must be positive".into()));
                }
                self.distinct_margin = m;
            }
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }
}
