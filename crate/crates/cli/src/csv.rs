//! Minimal CSV writer and reader with locale-free number formatting.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
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

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

/// Row helper: `row![k, float(t), ...]` becomes a `Vec<String>`.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

/// Parsed CSV file: header plus string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Parsed {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric column by name; panics on missing columns or bad numbers.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let c = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .map(|r| r[c].parse().expect("numeric cell"))
            .collect()
    }
}

pub fn parse(text: &str) -> Parsed {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|l| l.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Parsed { header, rows }
}

pub fn read(path: &Path) -> Result<Parsed, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse(&text))
}

/// Appends `key: value` to a summary buffer.
pub fn summary_line(buf: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(buf, "{key}: {value}");
}
