//! Tabular output in CSV or JSON with a metadata header.

use std::io::{self, Write};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{OutputFormat, RunConfig};

pub const SCHEMA: &str = "twistqm/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) if v.is_nan() => "nan".to_string(),
            Cell::Num(v) => format!("{v:.11e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Compact config echo and its SHA-256 hex digest.
pub fn config_fingerprint(config: &RunConfig) -> (String, String) {
    let echo = config.echo().to_string();
    let digest = Sha256::digest(echo.as_bytes());
    let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
    (echo, hex)
}

pub fn write_table<W: Write>(out: &mut W, table: &Table, config: &RunConfig, format: OutputFormat) -> io::Result<()> {
    let (echo, hash) = config_fingerprint(config);
    match format {
        OutputFormat::Csv => {
            writeln!(out, "# schema: {SCHEMA}")?;
            writeln!(out, "# command: {}", config.command.name())?;
            writeln!(out, "# config_sha256: {hash}")?;
            writeln!(out, "# config: {echo}")?;
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "command": config.command.name(),
                "config": config.echo(),
                "config_sha256": hash,
                "rows": rows,
            });
            serde_json::to_writer(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
