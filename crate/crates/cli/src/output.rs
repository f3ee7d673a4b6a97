//! JSON and CSV rendering of command results.

use std::io::Write;

use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A command result: the JSON object, plus optional explicit CSV rows for
/// commands whose natural CSV form is a table rather than one record.
pub struct Report {
    pub json: Value,
    pub table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Self { json, table: None }
    }
}

/// Flattens nested objects and arrays into dotted column names, e.g.
/// `F.0.1` or `conclusion.separates`.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn emit(report: &Report, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
            writeln!(out, "{text}").map_err(CliError::stdout)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            match &report.table {
                Some((header, rows)) => {
                    w.write_record(header).map_err(CliError::csv)?;
                    for row in rows {
                        w.write_record(row).map_err(CliError::csv)?;
                    }
                }
                None => {
                    let mut cells = Vec::new();
                    flatten("", &report.json, &mut cells);
                    w.write_record(cells.iter().map(|(k, _)| k))
                        .map_err(CliError::csv)?;
                    w.write_record(cells.iter().map(|(_, v)| v))
                        .map_err(CliError::csv)?;
                }
            }
            w.flush().map_err(CliError::stdout)?;
        }
    }
    Ok(())
}
