use serde_json::{json, Value};

use tsinorm_core::{Interval, Rational};

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 20;

pub fn decimal(r: &Rational) -> String {
    r.to_decimal(DECIMAL_DIGITS)
}

/// `"p/q"` for exact values, `{"lo": .., "hi": ..}` for enclosures, even
/// degenerate ones.
pub fn value_json(v: &Interval, exact: bool) -> Value {
    match v.as_point().filter(|_| exact) {
        Some(p) => json!(p.to_string()),
        None => json!({ "lo": v.lo().to_string(), "hi": v.hi().to_string() }),
    }
}

pub fn decimal_json(v: &Interval, exact: bool) -> Value {
    match v.as_point().filter(|_| exact) {
        Some(p) => json!(decimal(p)),
        None => json!({ "lo": decimal(v.lo()), "hi": decimal(v.hi()) }),
    }
}

pub fn value_text(v: &Interval, exact: bool) -> String {
    match v.as_point().filter(|_| exact) {
        Some(p) => p.to_string(),
        None => format!("[{}, {}]", v.lo(), v.hi()),
    }
}

pub fn decimal_text(v: &Interval, exact: bool) -> String {
    match v.as_point().filter(|_| exact) {
        Some(p) => decimal(p),
        None => format!("[{}, {}]", decimal(v.lo()), decimal(v.hi())),
    }
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
