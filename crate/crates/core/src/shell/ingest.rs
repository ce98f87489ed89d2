use std::fmt;

use crate::algebra::{Event, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFormat {
    Jsonl,
    Csv,
}

/// A rejected input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of reading a stream: events in order, with the line each came
/// from, and one diagnostic per rejected line. Blank lines are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ingested {
    pub events: Vec<(usize, Event)>,
    pub diagnostics: Vec<Diagnostic>,
    pub blank: usize,
}

impl Ingested {
    pub fn into_events(self) -> Vec<Event> {
        self.events.into_iter().map(|(_, e)| e).collect()
    }
}

fn json_value(v: &serde_json::Value) -> Result<Value, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Value::Int(i))
            } else {
                n.as_f64().map(Value::Real).ok_or_else(|| format!("number {n} out of range"))
            }
        }
        serde_json::Value::String(s) => Ok(Value::Text(s.clone())),
        other => Err(format!("unsupported attribute value {other}")),
    }
}

/// One JSON object whose fields are numbers or strings.
pub fn parse_jsonl_line(line: &str) -> Result<Event, String> {
    let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let serde_json::Value::Object(fields) = v else {
        return Err("expected a JSON object".into());
    };
    let mut e = Event::new();
    for (k, v) in &fields {
        e.insert(k.clone(), json_value(v).map_err(|m| format!("attribute `{k}`: {m}"))?);
    }
    Ok(e)
}

pub fn parse_jsonl(text: &str) -> Ingested {
    let mut out = Ingested::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            out.blank += 1;
            continue;
        }
        match parse_jsonl_line(line) {
            Ok(e) => out.events.push((i + 1, e)),
            Err(message) => out.diagnostics.push(Diagnostic { line: i + 1, message }),
        }
    }
    out
}

fn csv_value(cell: &str) -> Value {
    if let Ok(i) = cell.parse::<i64>() {
        Value::Int(i)
    } else if let Some(r) = cell.parse::<f64>().ok().filter(|r| r.is_finite()) {
        Value::Real(r)
    } else {
        Value::Text(cell.to_string())
    }
}

/// CSV with a header row naming the attributes. Cells are read as integers,
/// then reals, then text; an empty cell leaves its attribute unset.
pub fn parse_csv(text: &str) -> Ingested {
    let mut out = Ingested::default();
    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            out.diagnostics.push(Diagnostic { line: 1, message: e.to_string() });
            return out;
        }
    };
    if let Some(dup) = headers.iter().enumerate().find(|(i, h)| headers.iter().take(*i).any(|g| g == *h)) {
        out.diagnostics.push(Diagnostic { line: 1, message: format!("duplicate column `{}`", dup.1) });
        return out;
    }
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                out.diagnostics.push(Diagnostic { line, message: e.to_string() });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|c| c.is_empty()) {
            out.blank += 1;
            continue;
        }
        if record.len() != headers.len() {
            out.diagnostics.push(Diagnostic {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
            continue;
        }
        let mut e = Event::new();
        for (h, cell) in headers.iter().zip(record.iter()) {
            if !cell.is_empty() {
                e.insert(h.to_string(), csv_value(cell));
            }
        }
        out.events.push((line, e));
    }
    // The reader skips empty lines without yielding a record.
    out.blank += text.lines().filter(|l| l.trim_end_matches('\r').is_empty()).count();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_prefer_the_narrowest_type() {
        assert_eq!(csv_value("7"), Value::Int(7));
        assert_eq!(csv_value("7.25"), Value::Real(7.25));
        assert_eq!(csv_value("inf"), Value::Text("inf".into()));
        assert_eq!(csv_value("T"), Value::Text("T".into()));
    }
}
