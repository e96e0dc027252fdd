use std::io;
use std::path::Path;

use layerfield::json::JsonError;
use layerfield::{BipotentError, UniformError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error in {input} at line {line}, column {column}: {message}")]
    Parse { input: String, line: usize, column: usize, message: String },
    #[error("no binding named {0:?} in the session")]
    UnknownBinding(String),
    #[error("binding {name:?} is a {found}, expected a {expected}")]
    BindingKind { name: String, expected: &'static str, found: &'static str },
    #[error("binding {0:?} is defined twice")]
    DuplicateBinding(String),
    #[error("a session file is needed to resolve {0}")]
    NoSession(String),
    #[error("standard input can only be read once per command")]
    StdinTwice,
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("invalid {what}: {reason}")]
    Argument { what: &'static str, reason: String },
    #[error(transparent)]
    Input(#[from] JsonError),
    #[error(transparent)]
    Bipotent(#[from] BipotentError),
    #[error(transparent)]
    Uniform(#[from] UniformError),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Stable machine-readable tag for `--json` error output.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "ParseError",
            CliError::UnknownBinding(_) => "UnknownBinding",
            CliError::BindingKind { .. } => "BindingKind",
            CliError::DuplicateBinding(_) => "DuplicateBinding",
            CliError::NoSession(_) => "NoSession",
            CliError::StdinTwice => "StdinTwice",
            CliError::DescriptorMismatch(_) => "DescriptorMismatch",
            CliError::Argument { .. } => "Argument",
            CliError::Input(JsonError::Bipotent(BipotentError::InconsistentRelations { .. }))
            | CliError::Bipotent(BipotentError::InconsistentRelations { .. }) => "InconsistentRelations",
            CliError::Input(_) => "InvalidInput",
            CliError::Bipotent(_) => "Bipotent",
            CliError::Uniform(_) => "Uniform",
        }
    }
}
