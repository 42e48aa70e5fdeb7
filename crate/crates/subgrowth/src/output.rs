//! Tabular results rendered as aligned text, CSV or JSON, and the schema
//! check both machine formats must pass.
//!
//! JSON documents have the shape
//! `{"title": s, "columns": [s..], "rows": [{column: s, ..}], "notes": [s..]}`
//! with every cell a string; exact integers and rationals stay exact.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Notes are part of the table and JSON forms only; CSV carries rows.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        let _ = writeln!(out, "# {}", self.title);
        line(&self.columns, &mut out);
        for row in &self.rows {
            line(row, &mut out);
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn render_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> =
                    self.columns.iter().cloned().zip(row.iter().map(|c| Value::String(c.clone()))).collect();
                Value::Object(object)
            })
            .collect();
        let doc = json!({
            "title": self.title,
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
        text
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("columns {found:?}, expected {expected:?}")]
    Columns { found: Vec<String>, expected: Vec<String> },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

/// Validates CSV output against `columns`; returns the number of data rows.
pub fn check_csv(text: &str, columns: &[&str]) -> Result<usize, SchemaError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| SchemaError::Malformed(e.to_string()))?;
    if header.iter().ne(columns.iter().copied()) {
        return Err(SchemaError::Columns {
            found: header.iter().map(String::from).collect(),
            expected: columns.iter().map(|c| c.to_string()).collect(),
        });
    }
    let mut count = 0;
    for (i, record) in reader.records().enumerate() {
        record.map_err(|e| SchemaError::Row { row: i + 1, message: e.to_string() })?;
        count += 1;
    }
    Ok(count)
}

/// Validates JSON output against `columns`; returns the number of rows.
pub fn check_json(text: &str, columns: &[&str]) -> Result<usize, SchemaError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| SchemaError::Malformed(e.to_string()))?;
    let object = doc.as_object().ok_or_else(|| SchemaError::Malformed("top level is not an object".into()))?;
    let mut keys: Vec<&str> = object.keys().map(String::as_str).collect();
    keys.sort_unstable();
    if keys != ["columns", "notes", "rows", "title"] {
        return Err(SchemaError::Malformed(format!("unexpected keys {keys:?}")));
    }
    if !object["title"].is_string() {
        return Err(SchemaError::Malformed("title is not a string".into()));
    }
    let strings = |v: &Value| -> Option<Vec<String>> {
        v.as_array()?.iter().map(|x| x.as_str().map(String::from)).collect()
    };
    let found = strings(&object["columns"]).ok_or_else(|| SchemaError::Malformed("columns".into()))?;
    if found.iter().map(String::as_str).ne(columns.iter().copied()) {
        return Err(SchemaError::Columns { found, expected: columns.iter().map(|c| c.to_string()).collect() });
    }
    strings(&object["notes"]).ok_or_else(|| SchemaError::Malformed("notes must be strings".into()))?;
    let rows = object["rows"].as_array().ok_or_else(|| SchemaError::Malformed("rows is not an array".into()))?;
    for (i, row) in rows.iter().enumerate() {
        let fail = |message: &str| SchemaError::Row { row: i + 1, message: message.into() };
        let cells = row.as_object().ok_or_else(|| fail("not an object"))?;
        if cells.len() != columns.len() {
            return Err(fail("wrong number of cells"));
        }
        for column in columns {
            match cells.get(*column) {
                Some(Value::String(_)) => {}
                Some(_) => return Err(fail(&format!("{column} is not a string"))),
                None => return Err(fail(&format!("missing {column}"))),
            }
        }
    }
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("sample", &["n", "value"]);
        r.push(vec!["1".into(), "1".into()]);
        r.push(vec!["2".into(), "-12, \"quoted\"".into()]);
        r.note("note");
        r
    }

    #[test]
    fn machine_formats_pass_schema() {
        let r = sample();
        assert_eq!(check_csv(&r.render(Format::Csv), &["n", "value"]), Ok(2));
        assert_eq!(check_json(&r.render(Format::Json), &["n", "value"]), Ok(2));
        assert!(matches!(check_csv(&r.render(Format::Csv), &["n"]), Err(SchemaError::Columns { .. })));
        assert!(check_json("{\"title\": 1}", &["n"]).is_err());
        let wrong = r#"{"title":"t","columns":["n"],"rows":[{"n":1}],"notes":[]}"#;
        assert_eq!(check_json(wrong, &["n"]), Err(SchemaError::Row { row: 1, message: "n is not a string".into() }));
    }

    #[test]
    fn table_is_aligned() {
        let text = sample().render(Format::Table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# sample");
        assert_eq!(lines[1], "n          value");
        assert_eq!(lines[2], "1              1");
        assert_eq!(lines.last(), Some(&"# note"));
    }
}
