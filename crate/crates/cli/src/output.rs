//! Report rows and their CSV/JSON serialization.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// One typed report field.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn to_json(&self) -> Result<serde_json::Value> {
        Ok(match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .with_context(|| format!("non-finite value {v} in report"))?,
            Cell::Bool(v) => serde_json::Value::Bool(*v),
        })
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
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

/// A tabular command report with fixed columns.
#[derive(Debug)]
pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    all_pass: bool,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            all_pass: true,
        }
    }

    /// Appends a row; `pass` feeds the process exit code.
    pub fn push(&mut self, cells: Vec<Cell>, pass: bool) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self.all_pass &= pass;
    }

    pub fn all_pass(&self) -> bool {
        self.all_pass
    }

    pub fn to_csv(&self) -> String {
        let mut text = self.columns.join(",");
        text.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv).collect();
            text.push_str(&fields.join(","));
            text.push('\n');
        }
        text
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    object.insert((*name).to_string(), cell.to_json()?);
                }
                Ok(serde_json::Value::Object(object))
            })
            .collect::<Result<_>>()?;
        let mut text = serde_json::to_string_pretty(&rows)?;
        text.push('\n');
        Ok(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Writes to stdout, or atomically (tmp file + rename) to `out`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let mut tmp = PathBuf::from(path);
            let mut name = tmp
                .file_name()
                .map(|n| n.to_os_string())
                .unwrap_or_default();
            if name.is_empty() {
                bail!("output path has no file name");
            }
            name.push(".tmp");
            tmp.set_file_name(name);
            std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)
                .with_context(|| format!("renaming to {}", path.display()))?;
            Ok(())
        }
    }
}
