use serde_json::{Map, Value};

/// Ordered key/value report, rendered as `key: value` lines or one JSON
/// object.
#[derive(Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let obj: Map<String, Value> = self.entries.iter().cloned().collect();
            return serde_json::to_string_pretty(&Value::Object(obj)).unwrap() + "\n";
        }
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  {}\n", text(item)));
                    }
                }
                _ => out.push_str(&format!("{k}: {}\n", text(v))),
            }
        }
        out
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", text(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
