//! `key = value` config files and the merged settings of one run.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Settings from a config file overlaid by command-line flags.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Config keys are written with `_` or `-`; flags use `-`.
pub fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

pub fn parse_config(src: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = normalize_key(k);
        if key.is_empty() {
            return Err(CliError::Input(format!("config line {}: empty key", lineno + 1)));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Input(format!(
                "config line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

impl Settings {
    /// Reads `path` and keeps only keys from `allowed`; anything else is an
    /// error.
    pub fn from_file(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (k, v) in parse_config(&src)? {
            if !allowed.contains(&k.as_str()) {
                return Err(CliError::Input(format!("unknown config key '{k}'")));
            }
            values.insert(k, v);
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Input(format!("invalid value '{v}' for '{key}'"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Input(format!("missing required setting '{key}'")))
    }

    /// Comma-separated list.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Input(format!("invalid number '{s}' in '{key}'")))
                })
                .collect(),
        }
    }

    pub fn flag(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some("true" | "yes" | "1" | "on") => Ok(true),
            Some("false" | "no" | "0" | "off") => Ok(false),
            Some(v) => Err(CliError::Input(format!("invalid boolean '{v}' for '{key}'"))),
        }
    }
}
