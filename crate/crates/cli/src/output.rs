//! CSV and JSON writers. Every file carries the tool version, the command and
//! the resolved arguments: as a `meta` object in JSON, and as constant
//! `arg_*` columns in CSV.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use occtime_core::moments::{format_f64, MomentTable, MomentValues};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Format, OutputArgs};

/// One table cell. Floats print with 17 significant digits in CSV.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(u64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => format_f64(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // JSON has no inf/nan; those go out as strings.
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => Value::String(v.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, w: W, meta: &Meta) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let consts = meta.columns();
        let mut header = self.header.clone();
        header.extend(consts.iter().map(|(k, _)| k.clone()));
        wr.write_record(&header)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.iter().map(Cell::csv).collect();
            rec.extend(consts.iter().map(|(_, v)| v.clone()));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Provenance attached to every output.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub command: &'static str,
    pub workers: usize,
    pub args: Value,
}

impl Meta {
    pub fn new<A: Serialize>(command: &'static str, workers: usize, args: &A) -> Result<Self> {
        let mut args = serde_json::to_value(args)?;
        if let Value::Object(m) = &mut args {
            flatten_into(m);
            m.remove("out");
        }
        Ok(Meta { version: env!("CARGO_PKG_VERSION"), command, workers, args })
    }

    /// `(column, value)` pairs for CSV: version, command, then every argument
    /// that was set.
    fn columns(&self) -> Vec<(String, String)> {
        let mut cols = vec![
            ("occtime_version".to_string(), self.version.to_string()),
            ("command".to_string(), self.command.to_string()),
        ];
        if let Value::Object(m) = &self.args {
            for (k, v) in m {
                let s = match v {
                    Value::Null => continue,
                    Value::Array(a) if a.is_empty() => continue,
                    Value::String(s) => s.clone(),
                    Value::Array(a) => a.iter().map(scalar_text).collect::<Vec<_>>().join(";"),
                    other => scalar_text(other),
                };
                cols.push((format!("arg_{k}"), s));
            }
        }
        cols
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => format_f64(f),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

// Lifts nested objects (flattened clap groups) into the top level.
fn flatten_into(m: &mut Map<String, Value>) {
    let nested: Vec<String> =
        m.iter().filter(|(k, v)| v.is_object() && k.as_str() != "out").map(|(k, _)| k.clone()).collect();
    for k in nested {
        if let Some(Value::Object(inner)) = m.remove(&k) {
            for (ik, iv) in inner {
                m.insert(ik, iv);
            }
        }
    }
}

/// Format from `--format`, else from the output extension, else CSV.
pub fn resolve_format(out: &OutputArgs) -> Format {
    out.format.unwrap_or_else(|| match out.output.as_deref().and_then(Path::extension) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

/// Writes `bytes` to the output path or standard output.
pub fn write_bytes(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)?;
            so.flush()?;
            Ok(())
        }
    }
}

/// Emits `table` as CSV, or `{meta, rows, ...extra}` as JSON.
pub fn emit(out: &OutputArgs, meta: &Meta, table: &Table, extra: Map<String, Value>) -> Result<()> {
    let bytes = match resolve_format(out) {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf, meta)?;
            buf
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("meta".into(), serde_json::to_value(meta)?);
            doc.insert("rows".into(), table.to_json_rows());
            doc.extend(extra);
            let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
            s.push('\n');
            s.into_bytes()
        }
    };
    write_bytes(out.output.as_deref(), &bytes)
}

/// Rows `n, value[, std_error], method, domain, lambda, <params>` of a moment table.
pub fn moment_table(t: &MomentTable) -> Table {
    let mut header = vec!["n".to_string(), "value".into()];
    if t.std_errors.is_some() {
        header.push("std_error".into());
    }
    header.extend(["method".into(), "domain".into(), "lambda".into(), "diffusion".into()]);
    header.extend(t.params.iter().map(|(k, _)| k.clone()));
    let domain = serde_json::to_value(t.domain).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let mut table = Table { header, rows: Vec::new() };
    for i in 0..t.max_order() {
        let value = match &t.values {
            MomentValues::Exact(_) => Cell::Text(t.values.render(i)),
            MomentValues::Float(v) => Cell::Num(v[i]),
        };
        let mut row: Vec<Cell> = vec![Cell::from(i + 1), value];
        if let Some(se) = &t.std_errors {
            row.push(se[i].into());
        }
        row.extend([
            Cell::Text(t.method.to_string()),
            Cell::Text(domain.clone()),
            t.lambda.into(),
            Cell::Text(t.diffusion.clone()),
        ]);
        row.extend(t.params.iter().map(|(_, v)| Cell::Text(v.to_string())));
        table.rows.push(row);
    }
    table
}
