//! Rendering of result tables as text, CSV or JSON.
//!
//! Every format is produced from the same [`Table`] cells, so text output is
//! always the JSON value rounded, never a separate computation.

use serde_json::{json, Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_infinite() && *v > 0.0 => Value::from("inf"),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }

    fn render(&self, precision: Option<usize>) -> String {
        match self {
            Cell::Num(v) if v.is_infinite() && *v > 0.0 => "inf".into(),
            Cell::Num(v) => match precision {
                Some(p) => format!("{v:.p$}"),
                None => format!("{v}"),
            },
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "-".into(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Header plus rows.
    Grid,
    /// A single row shown as `key = value` lines in text.
    Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub layout: Layout,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Cells flagged with a footnote marker in text output, as (row, column).
    pub flagged: Vec<(usize, usize)>,
}

impl Table {
    pub fn grid(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            layout: Layout::Grid,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            flagged: Vec::new(),
        }
    }

    pub fn grid_owned(name: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            layout: Layout::Grid,
            columns,
            rows: Vec::new(),
            flagged: Vec::new(),
        }
    }

    pub fn summary(name: &str, entries: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) =
            entries.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self {
            name: name.into(),
            layout: Layout::Summary,
            columns,
            rows: vec![row],
            flagged: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    fn rows_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        match self.layout {
            Layout::Summary => rows.into_iter().next().unwrap_or(Value::Null),
            Layout::Grid => Value::Array(rows),
        }
    }
}

/// Everything one invocation prints.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub params: Map<String, Value>,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(params: Map<String, Value>) -> Self {
        Self {
            params,
            tables: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let results: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| (t.name.clone(), t.rows_json()))
            .collect();
        json!({
            "params": self.params,
            "results": results,
            "warnings": self.warnings,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render(&self, format: Format, precision: Option<usize>) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .expect("report values are always serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(precision),
            Format::Text => self.render_text(precision.unwrap_or(3)),
        }
    }

    fn render_csv(&self, precision: Option<usize>) -> String {
        let mut out = String::new();
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# {}\n", table.name));
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| csv_field(&c.render(precision)))
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out
    }

    fn render_text(&self, precision: usize) -> String {
        let mut out = String::new();
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("{}\n", table.name));
            match table.layout {
                Layout::Summary => {
                    let width = table.columns.iter().map(|c| c.len()).max().unwrap_or(0);
                    for (c, v) in table.columns.iter().zip(table.rows.iter().flatten()) {
                        out.push_str(&format!("  {c:<width$} = {}\n", v.render(Some(precision))));
                    }
                }
                Layout::Grid => out.push_str(&grid_text(table, precision)),
            }
        }
        if !self.warnings.is_empty() {
            out.push('\n');
            for w in &self.warnings {
                out.push_str(&format!("* {w}\n"));
            }
        }
        out
    }
}

fn grid_text(table: &Table, precision: usize) -> String {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, v)| {
                    let mut s = v.render(Some(precision));
                    if table.flagged.contains(&(r, c)) {
                        s.push('*');
                    }
                    s
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = table
        .columns
        .iter()
        .enumerate()
        .map(|(c, h)| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| -> String {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        format!("  {}\n", padded.join("  "))
    };
    let mut out = line(&table.columns);
    for row in &cells {
        out.push_str(&line(row));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
