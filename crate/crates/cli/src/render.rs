use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use latwalk::verify::{Status, SCHEMA_VERSION};
use serde_json::{json, Map, Value};

use crate::Format;

/// Rows shared by the CSV and markdown renderings.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.iter().map(|c| c.replace('|', "\\|")).collect::<Vec<_>>().join(" | "));
        let mut out = line(&self.headers);
        out.push_str(&line(&vec!["---".to_string(); self.headers.len()]));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub body: Value,
    pub table: Table,
    /// Replaces the generic markdown table when present.
    pub markdown: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, status: Status, body: Value, table: Table) -> Self {
        Report { command, status, body, table, markdown: None }
    }

    pub fn unsupported(command: &'static str, message: &str) -> Self {
        let mut table = Table::new(&["status", "message"]);
        table.push(vec!["partial".into(), message.into()]);
        Report::new(command, Status::Partial, json!({ "messages": [message] }), table)
    }

    pub fn json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(self.command));
        obj.insert("status".into(), serde_json::to_value(self.status).expect("status serializes"));
        match &self.body {
            Value::Object(m) => {
                for (k, v) in m {
                    obj.entry(k.clone()).or_insert_with(|| v.clone());
                }
            }
            other => {
                obj.insert("result".into(), other.clone());
            }
        }
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json())? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.headers)?;
                for r in &self.table.rows {
                    w.write_record(r)?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Md => Ok(self.markdown.clone().unwrap_or_else(|| self.table.markdown())),
        }
    }
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.with_context(|| format!("writing {}", path.display()))
}
