//! Tables rendered as CSV (header row first) or as JSON lines.
//!
//! Floats are written with 17 significant digits in both forms; non-finite
//! floats become an empty CSV field or JSON `null`.

use crate::config::Format;
use std::fmt::Write;
use weylmax::format::sig17;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    /// Pre-rendered JSON, for nesting objects and arrays.
    Raw(String),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => sig17(*v),
            Cell::Float(_) | Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) | Cell::Raw(s) => s.clone(),
        }
    }

    pub fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => sig17(*v),
            Cell::Float(_) | Cell::Null => "null".into(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings always serialise"),
            Cell::Raw(s) => s.clone(),
        }
    }
}

/// A JSON object from ordered `(key, value)` pairs.
pub fn json_object(fields: &[(&str, Cell)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("keys serialise"), v.json()))
        .collect();
    format!("{{{}}}", body.join(","))
}

pub fn json_array(items: &[Cell]) -> String {
    let body: Vec<String> = items.iter().map(Cell::json).collect();
    format!("[{}]", body.join(","))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.headers.join(",")).unwrap();
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
            }
            Format::Json => {
                for row in &self.rows {
                    let fields: Vec<(&str, Cell)> = self.headers.iter().copied().zip(row.iter().cloned()).collect();
                    writeln!(out, "{}", json_object(&fields)).unwrap();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_rows() {
        let mut t = Table::new(&["q", "v", "note"]);
        t.push(vec![3u64.into(), 0.5.into(), "a,b".into()]);
        t.push(vec![(-1i64).into(), f64::NAN.into(), Cell::Null]);
        assert_eq!(
            t.render(Format::Csv),
            "q,v,note\n3,5.0000000000000000e-1,\"a,b\"\n-1,,\n"
        );
        assert_eq!(
            t.render(Format::Json),
            "{\"q\":3,\"v\":5.0000000000000000e-1,\"note\":\"a,b\"}\n{\"q\":-1,\"v\":null,\"note\":null}\n"
        );
    }

    #[test]
    fn json_numbers_parse_back() {
        let line = json_object(&[("x", 0.1.into()), ("ok", true.into())]);
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["x"].as_f64(), Some(0.1));
        assert_eq!(v["ok"].as_bool(), Some(true));
    }
}
