use crate::Format;
use perfmatch::Bounds;
use serde_json::{json, Map, Value};

/// A JSON report with a parallel list of text lines. Every report carries
/// `tool`, `seed` and `bounds`; keys serialise sorted, so output is stable.
pub struct Output {
    fields: Map<String, Value>,
    lines: Vec<String>,
    raw: Option<Value>,
}

impl Output {
    pub fn new(bounds: &Bounds, seed: u64) -> Self {
        let mut fields = Map::new();
        fields.insert(
            "tool".into(),
            json!({"name": "perfmatch", "version": env!("CARGO_PKG_VERSION")}),
        );
        fields.insert("seed".into(), json!(seed));
        fields.insert(
            "bounds".into(),
            serde_json::to_value(bounds).expect("bounds serialise"),
        );
        Output {
            fields,
            lines: Vec::new(),
            raw: None,
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.fields.insert(key.into(), v);
    }

    pub fn line(&mut self, s: String) {
        self.lines.push(s);
    }

    /// Emit `v` as is in JSON mode (generated graphs keep the shared format).
    pub fn raw(&mut self, v: Value) {
        if let Some(g) = v.get("graph") {
            let n = g["black"].as_array().map_or(0, Vec::len)
                + g["white"].as_array().map_or(0, Vec::len);
            let m = g["edges"].as_array().map_or(0, Vec::len);
            self.lines.push(format!(
                "{} {}: {n} vertices, {m} edges",
                v["family"], v["params"]
            ));
        }
        self.raw = Some(v);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = self
                    .raw
                    .clone()
                    .unwrap_or_else(|| Value::Object(self.fields.clone()));
                serde_json::to_string_pretty(&v).expect("report serialises") + "\n"
            }
            Format::Text => self.lines.iter().map(|l| format!("{l}\n")).collect(),
        }
    }
}
