//! Scenario files: flat `key = value` lines grouped under `[entry]` headers.
//!
//! Keys before the first header are defaults for every entry. `#` starts a
//! comment. Entry names must be unique.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub source: String,
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(source: &str, line: usize, message: impl Into<String>) -> ConfigError {
        ConfigError { source: source.to_string(), line, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.source, self.message)
        } else {
            write!(f, "{}:{}: {}", self.source, self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// A value together with the line it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value {
    pub text: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub line: usize,
    pub keys: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub source: String,
    pub defaults: BTreeMap<String, Value>,
    pub entries: Vec<Entry>,
}

impl Config {
    pub fn parse(source: &str, text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config { source: source.to_string(), ..Config::default() };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .map(str::trim)
                    .filter(|n| !n.is_empty())
                    .ok_or_else(|| ConfigError::new(source, line, format!("malformed section header {content:?}")))?;
                if cfg.entries.iter().any(|e| e.name == name) {
                    return Err(ConfigError::new(source, line, format!("duplicate entry [{name}]")));
                }
                cfg.entries.push(Entry { name: name.to_string(), line, keys: BTreeMap::new() });
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::new(source, line, format!("expected `key = value`, found {content:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::new(source, line, "empty key"));
            }
            let v = v.strip_prefix('"').and_then(|x| x.strip_suffix('"')).unwrap_or(v);
            let map = match cfg.entries.last_mut() {
                Some(e) => &mut e.keys,
                None => &mut cfg.defaults,
            };
            if map.insert(k.to_string(), Value { text: v.to_string(), line }).is_some() {
                return Err(ConfigError::new(source, line, format!("duplicate key {k:?}")));
            }
        }
        Ok(cfg)
    }

    /// The keys of an entry with the defaults filled in.
    pub fn resolved(&self, entry: &Entry) -> BTreeMap<String, Value> {
        let mut out = self.defaults.clone();
        out.extend(entry.keys.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_defaults() {
        let c = Config::parse("t", "seed = 3\n# comment\n[a]\ncheck = roots\nphi = \"A3\" # trailing\n\n[b]\ncheck = roots\n").unwrap();
        assert_eq!(c.defaults["seed"].text, "3");
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.entries[0].keys["phi"].text, "A3");
        assert_eq!(c.resolved(&c.entries[1])["seed"].text, "3");
    }

    #[test]
    fn errors_carry_lines() {
        let e = Config::parse("f.conf", "[a]\nbogus line\n").unwrap_err();
        assert_eq!((e.line, e.to_string().starts_with("f.conf:2:")), (2, true));
        assert_eq!(Config::parse("f", "[a]\n[a]\n").unwrap_err().line, 2);
        assert_eq!(Config::parse("f", "[a]\nx=1\nx=2\n").unwrap_err().line, 3);
        assert!(Config::parse("f", "").unwrap().entries.is_empty());
    }
}
