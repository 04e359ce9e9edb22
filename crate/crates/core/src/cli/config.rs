//! `key = value` configuration files and flag/file/default merging.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use super::CliError;

/// Parsed configuration file. Blank lines and `#` comments are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Parse(format!(
                    "config line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                )));
            };
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(CliError::Parse(format!("config line {}: empty key", lineno + 1)));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// Resolves settings by precedence flag > config file > default, recording
/// every resolved value for echoing into outputs.
#[derive(Debug)]
pub struct Resolver<'a> {
    file: &'a ConfigFile,
    pub effective: BTreeMap<String, Value>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a ConfigFile) -> Self {
        Resolver {
            file,
            effective: BTreeMap::new(),
        }
    }

    fn from_file<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.file.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Config(format!("config key `{key}` has invalid value `{s}`"))),
        }
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        if !v.is_finite() {
            return Err(CliError::Config(format!("`{key}` must be finite, got {v}")));
        }
        self.effective.insert(key.to_string(), Value::from(v));
        Ok(v)
    }

    pub fn usize(&mut self, key: &str, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        self.effective.insert(key.to_string(), Value::from(v));
        Ok(v)
    }

    pub fn u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        let v = match flag {
            Some(v) => v,
            None => self.from_file(key)?.unwrap_or(default),
        };
        self.effective.insert(key.to_string(), Value::from(v));
        Ok(v)
    }

    /// String-valued settings, parsed through clap's value enums.
    pub fn choice<T: clap::ValueEnum + Clone>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.file.raw(key) {
                None => default,
                Some(s) => T::from_str(s, true)
                    .map_err(|_| CliError::Config(format!("config key `{key}` has invalid value `{s}`")))?,
            },
        };
        let name = v
            .to_possible_value()
            .map(|p| p.get_name().to_string())
            .unwrap_or_default();
        self.effective.insert(key.to_string(), Value::from(name));
        Ok(v)
    }

    pub fn text(&mut self, key: &str, flag: Option<String>) -> Option<String> {
        let v = flag.or_else(|| self.file.raw(key).map(str::to_string));
        if let Some(s) = &v {
            self.effective.insert(key.to_string(), Value::from(s.clone()));
        }
        v
    }

    pub fn list(&mut self, key: &str, flag: Option<Vec<f64>>, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.file.raw(key) {
                None => default.to_vec(),
                Some(s) => s
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::Config(format!("config key `{key}` has invalid list `{s}`")))?,
            },
        };
        self.effective.insert(key.to_string(), Value::from(v.clone()));
        Ok(v)
    }
}
