//! Self-describing tabular artifacts: parameter echo, notes and one table,
//! rendered as CSV (with `#` comment lines) or JSON.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::Result;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(fmt_f64(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Round-trip exact float text: plain decimal for moderate magnitudes,
/// scientific notation otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Complex number as `re+imi`.
pub fn fmt_complex(z: num_complex::Complex64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

/// Output of one subcommand.
#[derive(Debug, Clone, Default)]
pub struct Artifact {
    /// Input parameters, in order.
    pub params: Vec<(String, String)>,
    /// Derived scalar results, in order.
    pub notes: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Artifact {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Self {
            params: vec![("command".into(), command.into())],
            columns,
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => Ok(self.render_json()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut text = format!("# kerrgen {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in self.params.iter().chain(&self.notes) {
            text.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        let body = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        text.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        Ok(text)
    }

    fn render_json(&self) -> String {
        let pairs = |v: &[(String, String)]| Value::Object(v.iter().map(|(k, x)| (k.clone(), json!(x))).collect());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, x)| (c.to_string(), x.json()))
                        .collect::<Map<_, _>>(),
                )
            })
            .collect();
        let doc = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "parameters": pairs(&self.params),
            "results": pairs(&self.notes),
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }

    /// Writes to `path`, or to standard output when `None`.
    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e.to_string())
}
