//! Resolving command arguments to parsed JSON documents.
//!
//! An argument is `-` (standard input), `@name` (session binding), inline
//! JSON (anything starting with `{`, `[` or `"`), or a file path.

use std::cell::Cell;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::CliError;
use crate::session::{Kind, Session};

pub fn parse_text<T: DeserializeOwned>(text: &str, input: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        input: input.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

// serde_json appends " at line L column C"; the position is reported separately
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub struct Inputs<'a> {
    session: Option<&'a Session>,
    stdin_used: Cell<bool>,
}

impl<'a> Inputs<'a> {
    pub fn new(session: Option<&'a Session>) -> Self {
        Inputs { session, stdin_used: Cell::new(false) }
    }

    pub fn load<T: DeserializeOwned>(&self, arg: &str, kind: Kind) -> Result<T, CliError> {
        if let Some(name) = arg.strip_prefix('@') {
            let session = self.session.ok_or_else(|| CliError::NoSession(arg.to_string()))?;
            let value = session.lookup(name, kind)?;
            return serde_json::from_value(value.clone()).map_err(|e| CliError::Parse {
                input: arg.to_string(),
                line: e.line(),
                column: e.column(),
                message: strip_position(&e.to_string()),
            });
        }
        if arg == "-" {
            if self.stdin_used.replace(true) {
                return Err(CliError::StdinTwice);
            }
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
            return parse_text(&text, "<stdin>");
        }
        if arg.starts_with(['{', '[', '"']) {
            return parse_text(arg, "<argument>");
        }
        let path = Path::new(arg);
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        parse_text(&text, arg)
    }
}
