use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

use crate::failure::Failure;

/// Significant digits of every printed float.
pub const DIGITS: usize = 10;

pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every float inside a JSON value.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn cell(x: f64) -> String {
    round(x).to_string()
}

pub fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// A finished result.
pub enum Rendered {
    Json(Value),
    Table { header: Vec<String>, rows: Vec<Vec<String>> },
    Text(String),
}

impl Rendered {
    pub fn table(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Rendered::Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn bytes(self) -> Result<Vec<u8>, Failure> {
        match self {
            Rendered::Json(mut v) => {
                round_json(&mut v);
                let mut s = serde_json::to_string_pretty(&v).map_err(|e| Failure::numerical(e.to_string()))?;
                s.push('\n');
                Ok(s.into_bytes())
            }
            Rendered::Table { header, rows } => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&header).map_err(|e| Failure::io("csv", e))?;
                for r in rows {
                    w.write_record(&r).map_err(|e| Failure::io("csv", e))?;
                }
                w.into_inner().map_err(|e| Failure::io("csv", e))
            }
            Rendered::Text(s) => Ok(s.into_bytes()),
        }
    }

    pub fn emit(self, out: Option<&Path>) -> Result<(), Failure> {
        let bytes = self.bytes()?;
        match out {
            Some(path) => File::create(path)
                .and_then(|mut f| f.write_all(&bytes))
                .map_err(|e| Failure::io(path.display(), e)),
            None => io::stdout().write_all(&bytes).map_err(|e| Failure::io("stdout", e)),
        }
    }
}
