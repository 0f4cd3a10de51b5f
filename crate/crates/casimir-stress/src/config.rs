//! Run configuration files: flat key-value text with one section per
//! subcommand, SI units only.
//!
//! ```text
//! materials = ./materials.lib     # optional, resolves names below
//!
//! [pressure]
//! wall = gold                     # library name or `ideal-metal`
//! gap = vacuum
//! temperature = 300               # K
//! a = 1e-6                        # m, single point ...
//! # a_min = 1e-7                  # ... or a geometric scan
//! # a_max = 1e-5
//! # a_points = 9
//! ```
//!
//! Unknown keys are errors carrying the line and column where the key
//! starts. Values never carry unit suffixes.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown key {key:?} in section [{section}]")]
    UnknownKey {
        line: usize,
        column: usize,
        key: String,
        section: String,
    },
    #[error("section [{section}]: missing key {key:?}")]
    MissingKey { section: String, key: String },
    #[error("missing section [{0}] in config")]
    MissingSection(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
struct RawValue {
    line: usize,
    column: usize,
    value: String,
}

/// Parsed configuration: top-level keys plus named sections.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    top: BTreeMap<String, RawValue>,
    sections: BTreeMap<String, BTreeMap<String, RawValue>>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section: Option<String> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if content.trim().is_empty() {
                continue;
            }
            let column = content.len() - content.trim_start().len() + 1;
            let trimmed = content.trim();
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                    line,
                    column,
                    message: "unterminated section header".into(),
                })?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(ConfigError::Syntax {
                        line,
                        column,
                        message: "empty section name".into(),
                    });
                }
                cfg.sections.entry(name.to_string()).or_default();
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                column,
                message: format!("expected `key = value`, got {trimmed:?}"),
            })?;
            let entry = RawValue {
                line,
                column,
                value: value.trim().to_string(),
            };
            let key = key.trim().to_string();
            match &section {
                Some(name) => {
                    cfg.sections.get_mut(name).unwrap().insert(key, entry);
                }
                None => {
                    cfg.top.insert(key, entry);
                }
            }
        }
        Ok(cfg)
    }

    /// Top-level `materials = PATH`, when present.
    pub fn materials_path(&self) -> Option<std::path::PathBuf> {
        self.top.get("materials").map(|v| v.value.clone().into())
    }

    pub fn section(&self, name: &str) -> Result<SectionReader<'_>, ConfigError> {
        let entries = self
            .sections
            .get(name)
            .ok_or_else(|| ConfigError::MissingSection(name.to_string()))?;
        Ok(SectionReader {
            name: name.to_string(),
            entries,
            consumed: std::cell::RefCell::new(Vec::new()),
        })
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }
}

/// Typed access to one section; tracks consumed keys so leftovers can be
/// rejected with their positions.
pub struct SectionReader<'a> {
    name: String,
    entries: &'a BTreeMap<String, RawValue>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl<'a> SectionReader<'a> {
    fn raw(&self, key: &str) -> Option<&'a RawValue> {
        let v = self.entries.get(key);
        if v.is_some() {
            self.consumed.borrow_mut().push(key.to_string());
        }
        v
    }

    pub fn get_str(&self, key: &str) -> Result<String, ConfigError> {
        self.opt_str(key)?.ok_or_else(|| ConfigError::MissingKey {
            section: self.name.clone(),
            key: key.to_string(),
        })
    }

    pub fn opt_str(&self, key: &str) -> Result<Option<String>, ConfigError> {
        Ok(self.raw(key).map(|v| v.value.clone()))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.opt_f64(key)?.ok_or_else(|| ConfigError::MissingKey {
            section: self.name.clone(),
            key: key.to_string(),
        })
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .value
                .parse::<f64>()
                .map(Some)
                .map_err(|e| ConfigError::Syntax {
                    line: v.line,
                    column: v.column,
                    message: format!("bad number for {key:?}: {e}"),
                }),
        }
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .value
                .parse::<usize>()
                .map(Some)
                .map_err(|e| ConfigError::Syntax {
                    line: v.line,
                    column: v.column,
                    message: format!("bad integer for {key:?}: {e}"),
                }),
        }
    }

    /// Comma-separated float list.
    pub fn opt_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => {
                let mut out = Vec::new();
                for part in v.value.split(',') {
                    let part = part.trim();
                    out.push(part.parse::<f64>().map_err(|e| ConfigError::Syntax {
                        line: v.line,
                        column: v.column,
                        message: format!("bad number {part:?} in list {key:?}: {e}"),
                    })?);
                }
                Ok(Some(out))
            }
        }
    }

    /// Fails if the section holds keys that were never read.
    pub fn finish(self) -> Result<(), ConfigError> {
        let consumed = self.consumed.borrow();
        for (key, v) in self.entries {
            if !consumed.contains(key) {
                return Err(ConfigError::UnknownKey {
                    line: v.line,
                    column: v.column,
                    key: key.clone(),
                    section: self.name.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Geometric grid between two positive endpoints, inclusive.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 || lo == hi {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|i| lo * (ratio * i as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_types() {
        let cfg = RunConfig::parse(
            "materials = lib.txt\n[pressure]\nwall = gold\na = 1e-6\n# comment\ntemperature = 300\n",
        )
        .unwrap();
        assert_eq!(cfg.materials_path().unwrap().to_str().unwrap(), "lib.txt");
        let s = cfg.section("pressure").unwrap();
        assert_eq!(s.get_str("wall").unwrap(), "gold");
        assert_eq!(s.get_f64("a").unwrap(), 1e-6);
        assert_eq!(s.get_f64("temperature").unwrap(), 300.0);
        s.finish().unwrap();
    }

    #[test]
    fn unknown_key_reports_position() {
        let cfg = RunConfig::parse("[pressure]\n  bogus = 1\n").unwrap();
        let s = cfg.section("pressure").unwrap();
        match s.finish() {
            Err(ConfigError::UnknownKey { line, column, key, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 3);
                assert_eq!(key, "bogus");
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_position() {
        match RunConfig::parse("[pressure]\nnonsense line\n") {
            Err(ConfigError::Syntax { line: 2, .. }) => {}
            other => panic!("expected syntax error, got {other:?}"),
        }
        match RunConfig::parse("[pressure]\na = fast\n").and_then(|c| {
            let s = c.section("pressure")?;
            s.get_f64("a")?;
            Ok(())
        }) {
            Err(ConfigError::Syntax { line: 2, .. }) => {}
            other => panic!("expected bad-number error, got {other:?}"),
        }
    }

    #[test]
    fn missing_section_is_an_error() {
        let cfg = RunConfig::parse("[pressure]\na = 1e-6\n").unwrap();
        assert!(matches!(
            cfg.section("classical"),
            Err(ConfigError::MissingSection(_))
        ));
    }

    #[test]
    fn lists_and_grids() {
        let cfg = RunConfig::parse("[cutoff-scan]\nlambdas = 1e8, 2e8,4e8\n").unwrap();
        let s = cfg.section("cutoff-scan").unwrap();
        assert_eq!(s.opt_f64_list("lambdas").unwrap().unwrap(), vec![1e8, 2e8, 4e8]);
        let g = geometric_grid(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(g.len(), 3);
    }
}
