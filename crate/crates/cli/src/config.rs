//! Flat key=value config files and flag/file/default resolution.
//!
//! Precedence: command-line flags beat config-file entries beat built-in
//! defaults. Keys use the long flag names with dashes replaced by
//! underscores (`t_end = 5`, `rel_tol = 1e-10`); `#` starts a comment.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected key = value, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    /// Parsed value for `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::usage(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }
}

/// flag > `config[key]` > default.
pub fn resolve<T: FromStr>(
    flag: Option<T>,
    cfg: &Config,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    Ok(resolve_opt(flag, cfg, key)?.unwrap_or(default))
}

/// flag > `config[key]`, with no default.
pub fn resolve_opt<T: FromStr>(
    flag: Option<T>,
    cfg: &Config,
    key: &str,
) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}
