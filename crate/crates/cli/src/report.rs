//! Deterministic report text: sorted keys, two-space indentation, and every
//! float written with 17 significant digits.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::files::InputDigest;

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub tolerances: frameweave::Tolerance,
    pub result: Value,
    pub runtime_ms: u64,
}

pub fn render(envelope: &Envelope) -> String {
    let value = serde_json::to_value(envelope).expect("envelopes serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => write!(out, "{b}").unwrap(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(indent + 1, out);
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => write_object(map, indent, out),
    }
}

fn write_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    out.push_str("{\n");
    for (k, key) in keys.iter().enumerate() {
        pad(indent + 1, out);
        out.push_str(&serde_json::to_string(key).unwrap());
        out.push_str(": ");
        write_value(&map[key.as_str()], indent + 1, out);
        out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
    }
    pad(indent, out);
    out.push('}');
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        let x = 2f64.sqrt();
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_float(f64::INFINITY), "null");
    }

    #[test]
    fn keys_are_sorted_and_output_is_valid_json() {
        let mut out = String::new();
        write_value(&json!({"b": [1, 2.5], "a": {"z": null, "y": [{"k": true}]}}), 0, &mut out);
        assert!(out.find("\"a\"").unwrap() < out.find("\"b\"").unwrap());
        assert!(out.find("\"y\"").unwrap() < out.find("\"z\"").unwrap());
        let back: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(back["b"][1], json!(2.5));
    }
}
