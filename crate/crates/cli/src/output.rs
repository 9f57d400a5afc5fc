//! CSV and JSON rendering of sweep tables.
//!
//! Numbers are written with twelve significant digits in scientific
//! notation, so parsing a cell and formatting it again reproduces the
//! same bytes.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::sweep::{Cell, Row, SweepSpec, Table};

pub const STATUS_COLUMN: &str = "status";
pub const STATUS_OK: &str = "ok";

/// Formats a number the way every table cell is written.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_number(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn status_text(row: &Row) -> String {
    match &row.error {
        None => STATUS_OK.to_string(),
        Some(e) => format!("error: {e}"),
    }
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = table.columns.iter().map(String::as_str).collect();
    header.push(STATUS_COLUMN);
    w.write_record(&header)?;
    for row in &table.rows {
        let mut record: Vec<String> = row.cells.iter().map(cell_text).collect();
        record.push(status_text(row));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(table: &Table) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(table, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn cell_json(cell: &Cell) -> Value {
    match cell {
        // Non-finite values have no JSON number form.
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(_) => Value::Null,
        Cell::Int(i) => json!(i),
        Cell::Text(s) => json!(s),
    }
}

fn rows_json(table: &Table) -> Vec<Value> {
    table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in table.columns.iter().zip(&row.cells) {
                obj.insert(name.clone(), cell_json(cell));
            }
            obj.insert(STATUS_COLUMN.into(), json!(status_text(row)));
            Value::Object(obj)
        })
        .collect()
}

#[derive(Serialize)]
struct Document<'a> {
    version: &'static str,
    spec: &'a SweepSpec,
    rows: Vec<Value>,
}

pub fn write_json<W: Write>(spec: &SweepSpec, table: &Table, mut out: W) -> Result<(), CliError> {
    let doc = Document {
        version: env!("CARGO_PKG_VERSION"),
        spec,
        rows: rows_json(table),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}
