//! Deterministic number formatting for CSV and JSON output.
//!
//! A number is printed in its shortest round-trip form when that needs at
//! most `precision` decimals, and otherwise rounded to `precision` decimals
//! with trailing zeros removed.

use serde_json::Value;

fn trimmed(v: f64, precision: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let short = v.to_string();
    let decimals = short.split_once('.').map_or(0, |(_, d)| d.len());
    let mut s = if decimals <= precision {
        short
    } else {
        let mut s = format!("{v:.precision$}");
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
        s
    };
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Grid coordinates and inputs: `1`, `0.25`.
pub fn coord(v: f64, precision: usize) -> String {
    trimmed(v, precision)
}

/// Computed values always carry a decimal point: `2.0`, `0.135335283237`.
pub fn value(v: f64, precision: usize) -> String {
    let mut s = trimmed(v, precision);
    if v.is_finite() && !s.contains('.') {
        s.push_str(".0");
    }
    s
}

/// The JSON number whose shortest form is [`value`]'s output.
pub fn json_number(v: f64, precision: usize) -> Value {
    trimmed(v, precision)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}
