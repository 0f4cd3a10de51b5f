//! Material library files: named permittivity models in a line-oriented
//! key-value format.
//!
//! ```text
//! # any comment
//! [material gold]
//! model = drude
//! omega_p = 1.38e16      # rad/s
//! gamma = 5.07e13        # rad/s
//!
//! [material water-static]
//! model = constant
//! eps = 80.0
//!
//! [material glass]
//! model = lorentz
//! oscillators = 1
//! f_1 = 1.0e32           # rad^2/s^2
//! omega_1 = 2.0e16       # rad/s
//! gamma_1 = 0.0          # rad/s
//! ```
//!
//! `model = plasma` takes `omega_p` only. All quantities are SI (rad/s);
//! there is no unit-suffix parsing. Unknown keys are rejected with the
//! offending line number. The name `vacuum` is built in and always
//! resolves to ε ≡ 1.

use crate::materials::{LorentzTerm, PermittivityModel};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key {key:?} for model {model:?}")]
    UnknownKey {
        line: usize,
        key: String,
        model: String,
    },
    #[error("material {name:?}, line {line}: missing key {key:?}")]
    MissingKey {
        name: String,
        line: usize,
        key: String,
    },
    #[error("material {name:?}: {source}")]
    BadMaterial {
        name: String,
        source: crate::materials::MaterialError,
    },
    #[error("duplicate material {name:?} (line {line})")]
    Duplicate { name: String, line: usize },
    #[error("unknown material {0:?}")]
    UnknownMaterial(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Named permittivity models, name-ordered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaterialLibrary {
    materials: BTreeMap<String, PermittivityModel>,
}

impl MaterialLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resolves a material name; `vacuum` is always available.
    pub fn get(&self, name: &str) -> Result<PermittivityModel, LibraryError> {
        if name == "vacuum" {
            return Ok(PermittivityModel::vacuum());
        }
        self.materials
            .get(name)
            .cloned()
            .ok_or_else(|| LibraryError::UnknownMaterial(name.to_string()))
    }

    pub fn insert(&mut self, name: impl Into<String>, model: PermittivityModel) {
        self.materials.insert(name.into(), model);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(String::as_str)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, LibraryError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, LibraryError> {
        let mut lib = MaterialLibrary::new();
        let mut current: Option<RawEntry> = None;

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            if let Some(section) = content.strip_prefix('[') {
                let section = section.strip_suffix(']').ok_or_else(|| LibraryError::Syntax {
                    line,
                    message: "unterminated section header".into(),
                })?;
                let name = section.strip_prefix("material").map(str::trim).ok_or_else(|| {
                    LibraryError::Syntax {
                        line,
                        message: format!("expected `[material NAME]`, got `[{section}]`"),
                    }
                })?;
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(LibraryError::Syntax {
                        line,
                        message: "material name must be a single token".into(),
                    });
                }
                if let Some(entry) = current.take() {
                    entry.finish(&mut lib)?;
                }
                if lib.materials.contains_key(name) || name == "vacuum" {
                    return Err(LibraryError::Duplicate {
                        name: name.to_string(),
                        line,
                    });
                }
                current = Some(RawEntry {
                    name: name.to_string(),
                    line,
                    keys: Vec::new(),
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| LibraryError::Syntax {
                line,
                message: format!("expected `key = value`, got {content:?}"),
            })?;
            let entry = current.as_mut().ok_or_else(|| LibraryError::Syntax {
                line,
                message: "key outside any [material ...] section".into(),
            })?;
            entry
                .keys
                .push((line, key.trim().to_string(), value.trim().to_string()));
        }
        if let Some(entry) = current.take() {
            entry.finish(&mut lib)?;
        }
        Ok(lib)
    }
}

struct RawEntry {
    name: String,
    line: usize,
    keys: Vec<(usize, String, String)>,
}

impl RawEntry {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        let pos = self.keys.iter().position(|(_, k, _)| k == key)?;
        let (line, _, value) = self.keys.remove(pos);
        Some((line, value))
    }

    fn take_f64(&mut self, key: &str) -> Result<f64, LibraryError> {
        let (line, value) = self.take(key).ok_or_else(|| LibraryError::MissingKey {
            name: self.name.clone(),
            line: self.line,
            key: key.to_string(),
        })?;
        value.parse::<f64>().map_err(|e| LibraryError::Syntax {
            line,
            message: format!("bad number for {key:?}: {e}"),
        })
    }

    fn finish(mut self, lib: &mut MaterialLibrary) -> Result<(), LibraryError> {
        let (model_line, model_tag) = self.take("model").ok_or_else(|| LibraryError::MissingKey {
            name: self.name.clone(),
            line: self.line,
            key: "model".into(),
        })?;
        let model = match model_tag.as_str() {
            "constant" => PermittivityModel::constant(self.take_f64("eps")?),
            "drude" => {
                let omega_p = self.take_f64("omega_p")?;
                let gamma = self.take_f64("gamma")?;
                PermittivityModel::drude(omega_p, gamma)
            }
            "plasma" => PermittivityModel::plasma(self.take_f64("omega_p")?),
            "lorentz" => {
                let count = self.take_f64("oscillators")? as usize;
                let mut terms = Vec::with_capacity(count);
                for j in 1..=count {
                    terms.push(LorentzTerm {
                        strength: self.take_f64(&format!("f_{j}"))?,
                        omega: self.take_f64(&format!("omega_{j}"))?,
                        gamma: self.take_f64(&format!("gamma_{j}"))?,
                    });
                }
                PermittivityModel::lorentz(terms)
            }
            other => {
                return Err(LibraryError::Syntax {
                    line: model_line,
                    message: format!(
                        "unknown model {other:?}; expected constant, drude, plasma or lorentz"
                    ),
                })
            }
        }
        .map_err(|source| LibraryError::BadMaterial {
            name: self.name.clone(),
            source,
        })?;

        if let Some((line, key, _)) = self.keys.first() {
            return Err(LibraryError::UnknownKey {
                line: *line,
                key: key.clone(),
                model: model_tag,
            });
        }
        lib.materials.insert(self.name, model);
        Ok(())
    }
}

/// One-line description used in output headers.
pub fn describe_model(model: &PermittivityModel) -> String {
    match model {
        PermittivityModel::Constant(e) => format!("constant(eps={e})"),
        PermittivityModel::Drude { omega_p, gamma } => {
            format!("drude(omega_p={omega_p:e}, gamma={gamma:e})")
        }
        PermittivityModel::Plasma { omega_p } => format!("plasma(omega_p={omega_p:e})"),
        PermittivityModel::Lorentz(terms) => {
            let parts: Vec<String> = terms
                .iter()
                .map(|t| format!("(f={:e}, omega={:e}, gamma={:e})", t.strength, t.omega, t.gamma))
                .collect();
            format!("lorentz[{}]", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# test library
[material gold]
model = drude
omega_p = 1.38e16
gamma = 5.07e13

[material water-static]
model = constant
eps = 80.0    # static value

[material glass]
model = lorentz
oscillators = 1
f_1 = 1.0e32
omega_1 = 2.0e16
gamma_1 = 0.0
";

    #[test]
    fn parses_all_variants() {
        let lib = MaterialLibrary::parse(SAMPLE).unwrap();
        assert_eq!(
            lib.get("gold").unwrap(),
            PermittivityModel::drude(1.38e16, 5.07e13).unwrap()
        );
        assert_eq!(
            lib.get("water-static").unwrap(),
            PermittivityModel::constant(80.0).unwrap()
        );
        assert!(matches!(lib.get("glass").unwrap(), PermittivityModel::Lorentz(_)));
        assert_eq!(lib.get("vacuum").unwrap(), PermittivityModel::vacuum());
        assert!(matches!(
            lib.get("unobtanium"),
            Err(LibraryError::UnknownMaterial(_))
        ));
    }

    #[test]
    fn rejects_unknown_keys_with_line_number() {
        let bad = "[material x]\nmodel = constant\neps = 2.0\ncolour = blue\n";
        match MaterialLibrary::parse(bad) {
            Err(LibraryError::UnknownKey { line, key, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(key, "colour");
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_and_malformed() {
        assert!(matches!(
            MaterialLibrary::parse("[material x]\nmodel = drude\nomega_p = 1e16\n"),
            Err(LibraryError::MissingKey { .. })
        ));
        assert!(matches!(
            MaterialLibrary::parse("model = constant\n"),
            Err(LibraryError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            MaterialLibrary::parse("[material x]\nmodel = constant\neps = fast\n"),
            Err(LibraryError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            MaterialLibrary::parse("[material vacuum]\nmodel = constant\neps = 1\n"),
            Err(LibraryError::Duplicate { .. })
        ));
    }

    #[test]
    fn rejects_invalid_physics() {
        let bad = "[material x]\nmodel = constant\neps = 0.3\n";
        assert!(matches!(
            MaterialLibrary::parse(bad),
            Err(LibraryError::BadMaterial { .. })
        ));
    }
}
