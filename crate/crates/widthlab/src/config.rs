//! Merging JSON config files with command-line flags.
//!
//! A config file is a flat JSON object using the same keys as the flags. Flags given on the
//! command line override keys from the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Number, Value};

use crate::report::CliError;

pub fn load_object(path: Option<&Path>) -> Result<Map<String, Value>, CliError> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    match serde_json::from_str(&text)? {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Usage(format!("{}: config must be a JSON object", path.display()))),
    }
}

/// Numbers become JSON numbers; anything else (e.g. `inf`) stays a string for the field's
/// own deserializer to judge.
fn flag_value(raw: &str) -> Value {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => {
            if let Ok(i) = raw.parse::<u64>() {
                Value::Number(i.into())
            } else {
                Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(raw.into()))
            }
        }
        _ => Value::String(raw.to_string()),
    }
}

/// `aliases` maps short config keys to the canonical key the flags use, so a file may say
/// `"s"` while `--s` writes `s_star`.
pub fn merge<T: DeserializeOwned>(
    config: Option<&Path>,
    aliases: &[(&str, &str)],
    flags: &[(&str, &Option<String>)],
) -> Result<T, CliError> {
    let mut obj = load_object(config)?;
    for (alias, canonical) in aliases {
        if let Some(v) = obj.remove(*alias) {
            obj.entry((*canonical).to_string()).or_insert(v);
        }
    }
    for (key, val) in flags {
        if let Some(raw) = val {
            obj.insert((*key).to_string(), flag_value(raw));
        }
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| CliError::Usage(e.to_string()))
}
