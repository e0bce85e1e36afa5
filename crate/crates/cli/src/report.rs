//! Structured command reports: a human-readable text form and a
//! byte-stable JSON mirror (`"schema": 1`).
//!
//! JSON maps are BTree-backed, so key order (and therefore the byte
//! stream) is deterministic for identical inputs. Timing is only attached
//! when explicitly requested, since it would break reproducibility.

use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct Report {
    pub command: Vec<String>,
    pub status: String,
    pub exit_code: i32,
    pub results: Map<String, Value>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: Vec<String>, status: impl Into<String>, exit_code: i32) -> Self {
        Report {
            command,
            status: status.into(),
            exit_code,
            results: Map::new(),
            timing_ms: None,
        }
    }

    pub fn error(command: Vec<String>, message: impl Into<String>) -> Self {
        let mut r = Report::new(command, "error", 1);
        r.insert("error", Value::String(message.into()));
        r
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn json(&self) -> Value {
        json!({
            "schema": 1,
            "command": self.command,
            "status": self.status,
            "exit_code": self.exit_code,
            "results": Value::Object(self.results.clone()),
            "timing_ms": self.timing_ms,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command.join(" ")));
        out.push_str(&format!("status: {}\n", self.status));
        for (k, v) in &self.results {
            render_entry(&mut out, k, v, 0);
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing: {ms} ms\n"));
        }
        out
    }
}

fn render_entry(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k2, v2) in map {
                render_entry(out, k2, v2, indent + 1);
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render_entry(out, &i.to_string(), item, indent + 1);
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}
