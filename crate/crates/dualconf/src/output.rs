//! The JSON envelope and CSV tables written to standard output.
//!
//! Finite numbers use the shortest decimal form that parses back to the same `f64`.
//! Unbounded interval endpoints are the strings `"-inf"` and `"inf"`.

use dualconf_core::duality::Endpoint;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// A real as a JSON value; infinities become `"inf"`/`"-inf"`.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn endpoint(e: Endpoint) -> Value {
    num(e.value())
}

/// The text of a real as it appears in both JSON and CSV output.
pub fn num_text(v: f64) -> String {
    match num(v) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct Envelope {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("envelope is valid JSON");
        s.push('\n');
        s
    }
}

/// A CSV table with a fixed header row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("write to memory");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(cells).expect("write to memory");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("flush to memory");
        String::from_utf8(bytes).expect("CSV cells are UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [
            0.1,
            -3.6441254544025092,
            1e-300,
            5e-324,
            1.0 / 3.0,
            12345678.9,
        ] {
            let back: f64 = num_text(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
        assert_eq!(num_text(f64::INFINITY), "inf");
        assert_eq!(num_text(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn envelope_key_order() {
        let e = Envelope {
            command: "x",
            inputs: Map::new(),
            result: json!({}),
            warnings: vec![],
        };
        let s = e.to_json();
        let first = s.find("schema_version").unwrap();
        assert!(first < s.find("command").unwrap());
        assert!(s.find("result").unwrap() < s.find("warnings").unwrap());
    }

    #[test]
    fn table_header_and_rows() {
        let mut t = Table::new(&["theta", "density"]);
        t.row([num_text(0.0), num_text(0.5)]);
        assert_eq!(t.finish(), "theta,density\n0.0,0.5\n");
    }
}
