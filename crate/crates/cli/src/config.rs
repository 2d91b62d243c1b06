//! Flat `key = value` run files. Keys are long flag names, with or without
//! the leading dashes; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    path: String,
    entries: BTreeMap<String, (usize, String)>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-")
}

impl ConfigFile {
    pub fn parse(path: &str, text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(CliError::config(path, line, format!("expected `key = value`, got {body:?}")));
            };
            let key = normalize(k);
            if key.is_empty() {
                return Err(CliError::config(path, line, "empty key"));
            }
            let value = v.trim().trim_matches('"').to_string();
            if let Some((first, _)) = entries.insert(key.clone(), (line, value)) {
                return Err(CliError::config(path, line, format!("duplicate key {key:?} (first set on line {first})")));
            }
        }
        Ok(Self { path: path.to_string(), entries })
    }

    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
        Self::parse(path, &text)
    }

    /// Rejects keys that are not flags of the running command.
    pub fn check_keys(&self, allowed: &[String]) -> Result<(), CliError> {
        for (key, (line, _)) in &self.entries {
            if !allowed.iter().any(|a| a == key) {
                return Err(CliError::config(&self.path, *line, format!("unknown key {key:?}")));
            }
        }
        Ok(())
    }

    /// The command-line value when given, else the file value.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                v.parse().map(Some).map_err(|e| CliError::config(&self.path, *line, format!("{key}: {e}")))
            }
        }
    }
}
