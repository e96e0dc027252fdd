use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub field: String,
    pub derivation: String,
}

impl Note {
    pub fn new(field: &str, derivation: &str) -> Self {
        Note { field: field.to_string(), derivation: derivation.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Note>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.command.join(" ")).unwrap();
        match &self.result {
            Value::Object(map) => {
                let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
                for (k, v) in map {
                    writeln!(out, "  {k:width$}  {}", plain(v)).unwrap();
                }
            }
            other => writeln!(out, "  {}", plain(other)).unwrap(),
        }
        if !self.notes.is_empty() {
            writeln!(out, "notes:").unwrap();
            for n in &self.notes {
                writeln!(out, "  {}: {}", n.field, n.derivation).unwrap();
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let r = Report {
            command: vec!["rank".into(), "p.json".into()],
            result: json!({"rank": "6", "over": "Z", "orders": [2, 3]}),
            notes: vec![Note::new("rank", "product of invariant factors")],
        };
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let bare = Report { notes: vec![], ..r };
        assert!(!bare.to_json().contains("notes"));
        assert_eq!(serde_json::from_str::<Report>(&bare.to_json()).unwrap(), bare);
    }

    #[test]
    fn text_layout() {
        let r = Report { command: vec!["semifield".into()], result: json!({"semifield": false, "text": "Q>0 ⊙ Z"}), notes: vec![] };
        assert_eq!(r.to_text(), "semifield\n  semifield  false\n  text       Q>0 ⊙ Z\n");
    }
}
