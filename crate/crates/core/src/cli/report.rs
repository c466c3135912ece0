use std::io::{self, Write};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    /// Four significant figures, trailing zeros dropped.
    fn short(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => {
                let rounded: f64 = format!("{v:.3e}").parse().unwrap_or(*v);
                rounded.to_string()
            }
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "-".into(),
        }
    }

    fn full(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

/// Output of a subcommand: rows for table and CSV rendering plus the JSON
/// document.
pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    json: serde_json::Value,
}

impl Report {
    pub fn new<T: Serialize>(columns: Vec<&'static str>, json: &T) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            json: serde_json::to_value(json).expect("report values serialize"),
        }
    }

    /// Single-record report from name/value pairs.
    pub fn record<T: Serialize>(pairs: Vec<(&'static str, Cell)>, json: &T) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let mut r = Self::new(columns, json);
        r.rows.push(row);
        r
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::full))?;
                }
                w.flush()
            }
            Format::Table if self.rows.len() == 1 => {
                let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
                for (name, cell) in self.columns.iter().zip(&self.rows[0]) {
                    writeln!(out, "{name:<width$}  {}", cell.short())?;
                }
                Ok(())
            }
            Format::Table => {
                let text: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::short).collect())
                    .collect();
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| text.iter().map(|r| r[i].len()).fold(c.len(), usize::max))
                    .collect();
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                writeln!(out, "{}", line(self.columns.clone()))?;
                for r in &text {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
                Ok(())
            }
        }
    }
}
