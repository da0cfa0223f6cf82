use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::Format;

/// Why a subcommand stopped.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input; exit code 1.
    Input(String),
    /// An internal cross-check disagreed; exit code 2.
    Internal(String),
}

/// Collects output records and renders them as text lines or JSON lines.
pub struct Emitter {
    format: Format,
    lines: Vec<String>,
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter {
            format,
            lines: Vec::new(),
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.record(format!("seed {seed}"), "seed", json!({ "seed": seed }));
    }

    /// One record: `text` in text mode, `fields` plus `"record": kind` in
    /// JSON mode. Multi-line text is allowed.
    pub fn record(&mut self, text: impl Into<String>, kind: &str, fields: Value) {
        match self.format {
            Format::Text => self.lines.push(text.into()),
            Format::Json => {
                let mut map = Map::new();
                map.insert("record".into(), Value::String(kind.into()));
                if let Value::Object(m) = fields {
                    map.extend(m);
                }
                self.lines.push(Value::Object(map).to_string());
            }
        }
    }

    pub fn finish(self, path: Option<&Path>) -> Result<(), String> {
        let mut body = self.lines.join("\n");
        body.push('\n');
        match path {
            Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
            None => std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| format!("stdout: {e}")),
        }
    }
}

/// 1-based comma-separated set, `-` when empty.
pub fn set(s: &[usize]) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().map(|q| (q + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|q| q + 1).collect()
}
