//! Named inputs shared between invocations.
//!
//! A session file is plain JSON:
//!
//! ```json
//! {"bindings": [{"name": "zq", "kind": "presentation", "value": {...}}], "log": []}
//! ```
//!
//! Arguments of the form `@name` resolve against it. Bindings are written by
//! hand and never modified by the tool; every successful command is appended
//! to `log`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Presentation,
    Generator,
    Descriptor,
    Poly,
    Scalar,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Presentation => "presentation",
            Kind::Generator => "generator",
            Kind::Descriptor => "descriptor",
            Kind::Poly => "poly",
            Kind::Scalar => "scalar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Binding {
    pub name: String,
    pub kind: Kind,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionFile {
    #[serde(default)]
    pub bindings: Vec<Binding>,
    #[serde(default)]
    pub log: Vec<Vec<String>>,
}

#[derive(Debug)]
pub struct Session {
    path: PathBuf,
    file: SessionFile,
}

impl Session {
    /// Loads `path`, or starts an empty session if it does not exist yet.
    pub fn open(path: &Path) -> Result<Self, CliError> {
        let file = if path.exists() {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            crate::input::parse_text::<SessionFile>(&text, &path.display().to_string())?
        } else {
            SessionFile::default()
        };
        let mut seen = BTreeSet::new();
        for b in &file.bindings {
            if !seen.insert(b.name.as_str()) {
                return Err(CliError::DuplicateBinding(b.name.clone()));
            }
        }
        Ok(Session { path: path.to_path_buf(), file })
    }

    pub fn lookup(&self, name: &str, kind: Kind) -> Result<&Value, CliError> {
        let b = self
            .file
            .bindings
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| CliError::UnknownBinding(name.to_string()))?;
        if b.kind != kind {
            return Err(CliError::BindingKind { name: name.to_string(), expected: kind.name(), found: b.kind.name() });
        }
        Ok(&b.value)
    }

    #[cfg(test)]
    pub fn log(&self) -> &[Vec<String>] {
        &self.file.log
    }

    pub fn record(&mut self, command: Vec<String>) -> Result<(), CliError> {
        self.file.log.push(command);
        let mut text = serde_json::to_string_pretty(&self.file).expect("session serializes");
        text.push('\n');
        fs::write(&self.path, text).map_err(|e| CliError::io(&self.path, e))
    }
}
