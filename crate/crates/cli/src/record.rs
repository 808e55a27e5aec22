use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "symq.run/1";

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub wall_clock_seconds: f64,
    pub rows: Vec<Value>,
    pub summary: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens each row object one level; the header is the union of keys in
/// first-seen order, led by the schema column.
fn write_csv<W: Write>(rows: &[Value], out: W) -> Result<()> {
    let mut keys: Vec<String> = Vec::new();
    let empty = Map::new();
    for row in rows {
        for k in row.as_object().unwrap_or(&empty).keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("schema".to_string()).chain(keys.iter().cloned()))?;
    for row in rows {
        let obj = row.as_object().unwrap_or(&empty);
        let mut rec = vec![SCHEMA.to_string()];
        rec.extend(keys.iter().map(|k| obj.get(k).map(cell).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit(record: &RunRecord, out: Option<&Path>, format: Format) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, record)?;
            writeln!(sink)?;
        }
        Format::Csv => write_csv(&record.rows, sink)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_header_is_union_of_keys() {
        let rows = vec![json!({"a": 1, "b": "x"}), json!({"a": 2, "c": true})];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "schema,a,b,c");
        assert_eq!(lines[1], "symq.run/1,1,x,");
        assert_eq!(lines[2], "symq.run/1,2,,true");
    }
}
