//! Table and report emission. Floats are written with 17 significant digits
//! in both formats so files diff cleanly and replay byte-for-byte.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::config::RunConfig;

/// Compact JSON with every float as `{:.16e}`.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct TableDocument<'a> {
    config: &'a RunConfig,
    columns: &'a [&'static str],
    rows: &'a [Vec<Cell>],
}

pub fn csv_header_prefix(command: &str) -> String {
    format!("# direop {command} config=")
}

pub fn render_csv(config: &RunConfig, table: &Table) -> anyhow::Result<String> {
    let mut out = csv_header_prefix(config.command.name());
    out.push_str(&to_json(config)?);
    out.push('\n');
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn render_table_json(config: &RunConfig, table: &Table) -> anyhow::Result<String> {
    let mut out = to_json(&TableDocument {
        config,
        columns: &table.columns,
        rows: &table.rows,
    })?;
    out.push('\n');
    Ok(out)
}
