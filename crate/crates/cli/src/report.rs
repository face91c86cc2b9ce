//! Command results as an ordered JSON object, rendered either as JSON or as an
//! indented plain-text outline of the same fields.

use serde_json::{Map, Value};

#[derive(Debug, Default)]
pub struct Report {
    pub body: Map<String, Value>,
    /// The checked property does not hold; exit code 1.
    pub failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.body.insert(key.to_string(), value.into());
        self
    }

    pub fn fail_if(&mut self, condition: bool) -> &mut Self {
        self.failed |= condition;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&Value::Object(self.body.clone())).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.body {
            entry(&mut out, 0, k, v);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        _ => None,
    }
}

fn pad(out: &mut String, indent: usize) {
    out.extend(std::iter::repeat_n(' ', indent));
}

fn entry(out: &mut String, indent: usize, key: &str, v: &Value) {
    pad(out, indent);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.is_empty() => out.push_str(&format!("{key}: none\n")),
        _ => {
            out.push_str(&format!("{key}:\n"));
            block(out, indent + 2, v);
        }
    }
}

/// Body of a non-scalar value at `indent`.
fn block(out: &mut String, indent: usize, v: &Value) {
    match v {
        Value::String(s) => {
            for line in s.lines() {
                pad(out, indent);
                out.push_str(line);
                out.push('\n');
            }
        }
        Value::Object(map) => {
            for (k, v) in map {
                entry(out, indent, k, v);
            }
        }
        Value::Array(items) => {
            for item in items {
                pad(out, indent);
                if let Some(s) = scalar(item) {
                    out.push_str(&format!("- {s}\n"));
                    continue;
                }
                out.push_str("-\n");
                block(out, indent + 2, item);
            }
        }
        _ => unreachable!("scalars are rendered inline"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn outline() {
        let mut r = Report::new();
        r.field("name", "x")
            .field("sets", json!(["{1}", "{1,b}"]))
            .field("empty", json!([]))
            .field("rows", json!([{"a": 1, "b": [true]}]))
            .field("text", "l1\nl2");
        assert_eq!(
            r.to_text(),
            "name: x\nsets:\n  - {1}\n  - {1,b}\nempty: none\nrows:\n  -\n    a: 1\n    b:\n      - true\ntext:\n  l1\n  l2\n"
        );
    }
}
