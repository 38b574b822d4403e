//! Deterministic rendering. CSV uses '.' decimals and 12 significant digits;
//! JSON carries a schema_version and sorted keys. Identical configs must
//! produce byte-identical bytes, so nothing here may consult clocks, locales,
//! or iteration order of unordered containers.

use std::path::Path;

use anyhow::{Context, Result};
use renormlab_core::report::{CheckRecord, VerificationReport};
use serde_json::{json, Value};

use crate::config::Format;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Flag(bool),
    Empty,
}

/// One command's output: a named table, with an overall verdict when the
/// command is a verification rather than a data dump.
#[derive(Debug, Clone)]
pub struct Document {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub pass: Option<bool>,
}

impl Document {
    pub fn table(name: &'static str, header: Vec<&'static str>) -> Document {
        Document {
            name,
            header,
            rows: Vec::new(),
            pass: None,
        }
    }

    pub fn from_report(name: &'static str, report: &VerificationReport) -> Document {
        Document {
            name,
            header: vec!["name", "anchor", "measured", "expected", "tolerance", "pass"],
            rows: report.records.iter().map(record_row).collect(),
            pass: Some(report.all_pass()),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(json_cell).collect()))
            .collect();
        let mut doc = json!({
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "header": self.header,
            "rows": rows,
        });
        if let Some(p) = self.pass {
            doc["pass"] = Value::Bool(p);
        }
        let mut text = serde_json::to_string_pretty(&doc).expect("static document shape");
        text.push('\n');
        text
    }
}

fn record_row(r: &CheckRecord) -> Vec<Cell> {
    vec![
        Cell::Text(r.name.clone()),
        Cell::Text(r.anchor.clone()),
        Cell::Num(r.measured),
        Cell::Num(r.expected),
        Cell::Num(r.tolerance),
        Cell::Flag(r.pass),
    ]
}

/// 12 significant digits, exponent form, '.' decimal separator.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn csv_cell(c: &Cell) -> String {
    match c {
        // field separator is reserved; no quoting layer in this format
        Cell::Text(s) => s.replace(',', ";"),
        Cell::Num(v) => fmt_num(*v),
        Cell::Int(i) => i.to_string(),
        Cell::Flag(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Num(v) => json!(v),
        Cell::Int(i) => json!(i),
        Cell::Flag(b) => Value::Bool(*b),
        Cell::Empty => Value::Null,
    }
}

/// Render to stdout or to `--out`.
pub fn emit(doc: &Document, format: Format, out: Option<&Path>) -> Result<()> {
    let text = doc.render(format);
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
