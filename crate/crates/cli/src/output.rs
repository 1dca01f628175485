use std::io::Write;

use serde_json::Value;

use crate::args::Format;
use crate::commands::Row;
use crate::CliError;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Human => {
            for r in rows {
                writeln!(out, "{}", r.human)?;
            }
        }
        Format::JsonLines => {
            for r in rows {
                serde_json::to_writer(&mut *out, &r.record).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            // header is the union of keys in first-seen order, so error
            // rows and full rows share one table
            let mut header: Vec<String> = Vec::new();
            for r in rows {
                if let Value::Object(m) = &r.record {
                    for k in m.keys() {
                        if !header.contains(k) {
                            header.push(k.clone());
                        }
                    }
                }
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&header).map_err(std::io::Error::from)?;
            for r in rows {
                let line: Vec<String> = header.iter().map(|k| r.record.get(k).map(cell).unwrap_or_default()).collect();
                w.write_record(&line).map_err(std::io::Error::from)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
