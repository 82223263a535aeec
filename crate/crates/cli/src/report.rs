//! CSV and JSON emission. Floats use Rust's shortest round-trip formatting so
//! identical runs give identical bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde_json::Value;

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    trailer: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// A `# ...` line appended after the rows.
    pub fn comment(&mut self, line: String) {
        self.trailer.push(line);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let mut bytes = w.into_inner().context("flushing csv")?;
        for line in &self.trailer {
            writeln!(bytes, "# {line}")?;
        }
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn cnum(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// Column names `xi_1, …, xi_n`.
pub fn xi_header(dimension: usize) -> Vec<String> {
    (1..=dimension).map(|i| format!("xi_{i}")).collect()
}

pub fn coords<T: ToString>(c: &[T]) -> Vec<String> {
    c.iter().map(ToString::to_string).collect()
}

/// JSON numbers cannot carry NaN or infinities; those become strings.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(format!("{x}"))
    }
}

pub fn jopt(x: Option<f64>) -> Value {
    x.map(jnum).unwrap_or(Value::Null)
}
