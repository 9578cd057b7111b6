//! Rendering of results as line-delimited JSON, CSV or aligned tables.
//! JSON and CSV numbers carry 12 significant digits, tables 6; infinities
//! are written as the string `"+inf"` / `"-inf"`.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub const EXPORT_DIGITS: usize = 12;
pub const TABLE_DIGITS: usize = 6;

#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Nums(Vec<f64>),
    Ints(Vec<usize>),
    /// Nested rows; JSON only.
    Rows(Vec<Row>),
}

pub type Row = Vec<(&'static str, Field)>;

pub fn text(s: impl Into<String>) -> Field {
    Field::Text(s.into())
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().expect("formatted float parses")
}

fn num_string(x: f64, digits: usize) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "+inf" } else { "-inf" }.into()
    } else {
        // `-0.0` prints as `-0`; normalise it
        let r = round_sig(x, digits) + 0.0;
        if r == 0.0 || (1e-4..1e15).contains(&r.abs()) {
            r.to_string()
        } else {
            format!("{r:e}")
        }
    }
}

fn json_num(x: f64) -> Value {
    let r = round_sig(x, EXPORT_DIGITS);
    serde_json::Number::from_f64(r + 0.0).map_or_else(|| Value::String(num_string(x, EXPORT_DIGITS)), Value::Number)
}

fn to_json(field: &Field) -> Value {
    match field {
        Field::Num(x) => json_num(*x),
        Field::Int(i) => Value::from(*i),
        Field::Text(s) => Value::String(s.clone()),
        Field::Bool(b) => Value::Bool(*b),
        Field::Nums(xs) => Value::Array(xs.iter().map(|&x| json_num(x)).collect()),
        Field::Ints(xs) => Value::Array(xs.iter().map(|&i| Value::from(i)).collect()),
        Field::Rows(rows) => Value::Array(rows.iter().map(row_json).collect()),
    }
}

fn row_json(row: &Row) -> Value {
    Value::Object(row.iter().map(|(k, v)| (k.to_string(), to_json(v))).collect::<Map<_, _>>())
}

fn to_cell(field: &Field, digits: usize) -> String {
    let join = |parts: Vec<String>| parts.join(";");
    match field {
        Field::Num(x) => num_string(*x, digits),
        Field::Int(i) => i.to_string(),
        Field::Text(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
        Field::Nums(xs) => join(xs.iter().map(|&x| num_string(x, digits)).collect()),
        Field::Ints(xs) => join(xs.iter().map(|i| i.to_string()).collect()),
        Field::Rows(rows) => format!("{} rows", rows.len()),
    }
}

/// Writes `rows` as one JSON object per line, a CSV table, or an aligned
/// table with a header.
pub fn write_rows(out: &mut impl Write, format: Format, rows: &[Row]) -> io::Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                writeln!(out, "{}", row_json(row))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if let Some(first) = rows.first() {
                w.write_record(first.iter().map(|(k, _)| *k))?;
            }
            for row in rows {
                w.write_record(row.iter().map(|(_, v)| to_cell(v, EXPORT_DIGITS)))?;
            }
            w.flush()?;
        }
        Format::Table => {
            let Some(first) = rows.first() else { return Ok(()) };
            let header: Vec<String> = first.iter().map(|(k, _)| k.to_string()).collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|(_, v)| to_cell(v, TABLE_DIGITS)).collect())
                .collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|c| {
                    std::iter::once(&header)
                        .chain(&body)
                        .map(|r| r[c].chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for line in std::iter::once(&header).chain(&body) {
                let cells: Vec<String> = line
                    .iter()
                    .zip(&widths)
                    .map(|(cell, &w)| format!("{cell:<w$}"))
                    .collect();
                writeln!(out, "{}", cells.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}

/// A single record: JSON line, two-line CSV, or a vertical key/value table.
pub fn write_record(out: &mut impl Write, format: Format, row: Row) -> io::Result<()> {
    match format {
        Format::Table => {
            let width = row.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &row {
                writeln!(out, "{k:<width$}  {}", to_cell(v, TABLE_DIGITS))?;
            }
            Ok(())
        }
        _ => write_rows(out, format, &[row]),
    }
}
