use std::path::Path;
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use nonlocal_games::Error;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits kept for floating-point results.
const FLOAT_DIGITS: usize = 12;

pub struct Input {
    pub path: String,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, Error> {
        let bytes = std::fs::read(path).map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))?;
        let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        let text = String::from_utf8(bytes).map_err(|e| Error::Argument(format!("{} is not UTF-8: {e}", path.display())))?;
        Ok(Input { path: path.display().to_string(), text, sha256 })
    }
}

pub enum Outcome {
    /// A document printed as is.
    Raw(String),
    Report { input: Option<Input>, result: Value, pass: Option<bool> },
}

impl Outcome {
    pub fn report(input: Input, result: Value, pass: Option<bool>) -> Self {
        Outcome::Report { input: Some(input), result, pass }
    }
}

/// Copies the fields of `extra` into the object `base`.
pub fn merge(base: &mut Value, extra: Value) {
    if let (Value::Object(base), Value::Object(extra)) = (base, extra) {
        base.extend(extra);
    }
}

fn header(command: &str) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out
}

pub fn render(command: &str, input: Option<&Input>, result: Value, pass: Option<bool>, elapsed: Option<Duration>) -> String {
    let mut out = header(command);
    if let Some(input) = input {
        out.insert("input".into(), json!({ "path": input.path, "sha256": input.sha256 }));
    }
    out.insert("result".into(), round_floats(result));
    if let Some(pass) = pass {
        out.insert("pass".into(), json!(pass));
    }
    if let Some(elapsed) = elapsed {
        out.insert("elapsed_ms".into(), round_floats(json!(elapsed.as_secs_f64() * 1e3)));
    }
    serde_json::to_string_pretty(&Value::Object(out)).expect("reports serialize")
}

pub fn render_error(command: &str, error: &Error) -> String {
    let mut out = header(command);
    let mut detail = json!({ "kind": error_kind(error), "message": error.to_string() });
    if let Error::Parse { line, column, .. } = error {
        detail["line"] = json!(line);
        detail["column"] = json!(column);
    }
    out.insert("error".into(), detail);
    serde_json::to_string_pretty(&Value::Object(out)).expect("reports serialize")
}

fn error_kind(error: &Error) -> &'static str {
    match error {
        Error::Shape(_) => "shape",
        Error::Argument(_) => "argument",
        Error::Parse { .. } => "parse",
        Error::Resource { .. } => "resource",
        Error::Unsupported(_) => "unsupported",
        Error::Certificate { .. } => "certificate",
        Error::Internal(_) => "internal",
    }
}

/// Rounds every non-integer number to [`FLOAT_DIGITS`] significant digits.
fn round_floats(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().expect("f64 number");
            let rounded: f64 = format!("{f:.prec$e}", prec = FLOAT_DIGITS - 1).parse().expect("formatted float");
            json!(rounded)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(round_floats(json!(0.1234567890123456)), json!(0.123456789012));
        assert_eq!(round_floats(json!(2.0f64.powi(56))), json!(7.20575940379e16));
        assert_eq!(round_floats(json!([1, "1/2"])), json!([1, "1/2"]));
    }
}
