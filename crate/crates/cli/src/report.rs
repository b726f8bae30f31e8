//! Deterministic JSON reports.

use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 15;

/// What every command prints on stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results: Value::Object(Map::new()),
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.clone()));
        map.insert("inputs".into(), self.inputs.clone());
        map.insert("results".into(), self.results.clone());
        map.insert(
            "warnings".into(),
            Value::Array(self.warnings.iter().cloned().map(Value::String).collect()),
        );
        canonical(&Value::Object(map))
    }

    /// Pretty-printed canonical JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        text.push('\n');
        text
    }
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits, with `-0`
/// mapped to `0`.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Sorted keys at every level and rounded floats. Non-finite floats become
/// `null`.
pub fn canonical(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round_significant(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&map[k]));
            }
            Value::Object(out)
        }
        other => other.clone(),
    }
}
