use std::fs;
use std::time::Instant;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "subsum-lab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a verb produced, before it is wrapped in the versioned envelope.
pub struct Report {
    pub command: &'static str,
    pub group: Value,
    pub inputs: Value,
    pub result: Value,
    pub verified: Option<bool>,
    pub violations: Vec<String>,
    pub code: u8,
}

impl Report {
    pub fn new(command: &'static str, group: Value, inputs: Value, result: Value) -> Report {
        Report { command, group, inputs, result, verified: None, violations: Vec::new(), code: 0 }
    }

    pub fn verified(mut self, ok: bool, violations: Vec<String>) -> Report {
        self.verified = Some(ok);
        self.violations = violations;
        if !ok {
            self.code = 1;
        }
        self
    }

    pub fn envelope(&self, started: Instant) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "group": self.group,
            "inputs": self.inputs,
            "result": self.result,
            "verified": self.verified,
            "violations": self.violations,
            "timing_ms": started.elapsed().as_millis() as u64,
        })
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(m) = v {
                text_object(m, 0, &mut out);
            }
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_object(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        if k == "schema" {
            continue;
        }
        match v {
            Value::Object(inner) if !inner.is_empty() => {
                out.push_str(&format!("{pad}{k}:\n"));
                text_object(inner, indent + 2, out);
            }
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for (i, item) in items.iter().enumerate() {
                    match item {
                        Value::Object(inner) => {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            text_object(inner, indent + 4, out);
                        }
                        other => out.push_str(&format!("{pad}  [{i}] {}\n", scalar(other))),
                    }
                }
            }
            Value::Array(items) if items.iter().all(|x| x.is_string()) && !items.is_empty() => {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    out.push_str(&format!("{pad}  - {}\n", scalar(item)));
                }
            }
            other => out.push_str(&format!("{pad}{k}: {}\n", scalar(other))),
        }
    }
}

/// Writes to `--out` when given, else standard output.
pub fn write(text: &str, out: Option<&str>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
