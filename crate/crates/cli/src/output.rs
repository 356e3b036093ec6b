//! CSV and JSON emission.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format, RunConfig};

/// 17 significant digits.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column `name` of every row.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A command's result in both shapes; `table` is absent for nested results.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub json: Value,
    pub table: Option<Table>,
    pub default_format: Format,
}

impl Artifact {
    pub fn json<T: Serialize>(value: &T) -> Result<Self, CliError> {
        Ok(Artifact {
            json: serde_json::to_value(value)?,
            table: None,
            default_format: Format::Json,
        })
    }

    pub fn table(table: Table) -> Self {
        let json = Value::Array(
            table
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        table
                            .header
                            .iter()
                            .zip(r)
                            .map(|(h, v)| (h.to_string(), Value::String(v.clone())))
                            .collect(),
                    )
                })
                .collect(),
        );
        Artifact {
            json,
            table: Some(table),
            default_format: Format::Csv,
        }
    }

    pub fn write(&self, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
        let config = serde_json::to_value(cfg)?;
        match cfg.format.unwrap_or(self.default_format) {
            Format::Json => {
                let doc = serde_json::json!({ "config": config, "result": self.json });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("this command has no CSV form; use --format json".into()))?;
                writeln!(out, "# config: {}", serde_json::to_string(&config)?)?;
                let header: Vec<String> = table.header.iter().map(|h| csv_field(h)).collect();
                writeln!(out, "{}", header.join(","))?;
                for row in &table.rows {
                    let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
                    writeln!(out, "{}", row.join(","))?;
                }
            }
        }
        Ok(())
    }
}

/// Strips an output envelope `{config, result}` if present.
pub fn unwrap_result(text: &str) -> Result<String, CliError> {
    let v: Value = serde_json::from_str(text)?;
    match v {
        Value::Object(mut map) if map.contains_key("config") && map.contains_key("result") => {
            Ok(map.remove("result").expect("checked").to_string())
        }
        _ => Ok(text.to_string()),
    }
}
